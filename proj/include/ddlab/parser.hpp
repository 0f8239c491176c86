#ifndef DDLAB_PARSER_HPP
#define DDLAB_PARSER_HPP

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "laurent.hpp"
#include "polynomial.hpp"
#include "rational.hpp"

namespace ddlab
{

namespace detail
{

// Polynomial with signed exponents, used only while parsing.
using RawPoly = std::map<Exponents, Rational>;

inline void raw_add_term(RawPoly &p, const Exponents &e, const Rational &c)
{
    if (c == 0) {
        return;
    }
    auto [it, inserted] = p.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) {
            p.erase(it);
        }
    }
}

inline RawPoly raw_mul(const RawPoly &a, const RawPoly &b)
{
    RawPoly r;
    for (const auto &[ea, ca] : a) {
        for (const auto &[eb, cb] : b) {
            raw_add_term(r, add_exponents(ea, eb), ca * cb);
        }
    }
    return r;
}

class ExprParser
{
public:
    ExprParser(std::string_view text, const VarContext &ctx, std::optional<std::size_t> laurent_var)
        : text_(text), ctx_(ctx), laurent_var_(laurent_var)
    {
    }

    RawPoly parse()
    {
        skip_ws();
        if (pos_ >= text_.size()) {
            throw parse_error("empty expression", pos_);
        }
        RawPoly r = expr();
        skip_ws();
        if (pos_ < text_.size()) {
            throw parse_error(std::string("unexpected character '") + text_[pos_] + "'", pos_);
        }
        return r;
    }

private:
    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool accept(char ch)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ch) {
            ++pos_;
            return true;
        }
        return false;
    }

    RawPoly constant(const Rational &c) const
    {
        RawPoly r;
        raw_add_term(r, Exponents(ctx_.size(), 0), c);
        return r;
    }

    RawPoly expr()
    {
        RawPoly r = term();
        while (true) {
            if (accept('+')) {
                for (const auto &[e, c] : term()) {
                    raw_add_term(r, e, c);
                }
            } else if (accept('-')) {
                for (const auto &[e, c] : term()) {
                    raw_add_term(r, e, -c);
                }
            } else {
                return r;
            }
        }
    }

    RawPoly term()
    {
        RawPoly r = factor();
        while (accept('*')) {
            r = raw_mul(r, factor());
        }
        return r;
    }

    RawPoly factor()
    {
        if (accept('-')) {
            RawPoly r = factor();
            for (auto &[e, c] : r) {
                c = -c;
            }
            return r;
        }
        if (accept('+')) {
            return factor();
        }
        return power();
    }

    RawPoly power()
    {
        std::optional<std::size_t> var;
        RawPoly base = primary(var);
        if (!accept('^')) {
            return base;
        }
        skip_ws();
        const std::size_t exp_pos = pos_;
        bool negative = false;
        if (accept('-')) {
            negative = true;
            skip_ws();
        }
        const std::size_t digits_start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (pos_ == digits_start) {
            throw parse_error("expected integer exponent", pos_);
        }
        const std::string digits(text_.substr(digits_start, pos_ - digits_start));
        if (digits.size() > 9) {
            throw parse_error("exponent too large", digits_start);
        }
        const std::int32_t n = std::stoi(digits);
        if (negative) {
            if (!laurent_var_ || var != laurent_var_) {
                throw parse_error("negative exponent", exp_pos);
            }
            RawPoly r;
            Exponents e(ctx_.size(), 0);
            e[*laurent_var_] = -n;
            raw_add_term(r, e, 1);
            return r;
        }
        RawPoly r = constant(1);
        for (std::int32_t i = 0; i < n; ++i) {
            r = raw_mul(r, base);
        }
        return r;
    }

    RawPoly primary(std::optional<std::size_t> &var)
    {
        skip_ws();
        if (pos_ >= text_.size()) {
            throw parse_error("unexpected end of input", pos_);
        }
        const char ch = text_[pos_];
        if (ch == '(') {
            ++pos_;
            RawPoly r = expr();
            if (!accept(')')) {
                throw parse_error("expected ')'", pos_);
            }
            return r;
        }
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            const std::size_t start = pos_;
            while (pos_ < text_.size()
                   && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                ++pos_;
            }
            const std::string name(text_.substr(start, pos_ - start));
            auto idx = ctx_.index_of(name);
            if (!idx) {
                throw parse_error("unknown variable '" + name + "'", start);
            }
            var = idx;
            RawPoly r;
            Exponents e(ctx_.size(), 0);
            e[*idx] = 1;
            raw_add_term(r, e, 1);
            return r;
        }
        throw parse_error(std::string("unexpected character '") + ch + "'", pos_);
    }

    RawPoly number()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        std::string lit(text_.substr(start, pos_ - start));
        // A rational literal is digits '/' digits with no spaces.
        if (pos_ + 1 < text_.size() && text_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
            ++pos_;
            const std::size_t dstart = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
            }
            const std::string den(text_.substr(dstart, pos_ - dstart));
            if (Integer(den) == 0) {
                throw parse_error("zero denominator", dstart);
            }
            return constant(make_rational(Integer(lit), Integer(den)));
        }
        return constant(Rational(Integer(lit)));
    }

    std::string_view text_;
    const VarContext &ctx_;
    std::optional<std::size_t> laurent_var_;
    std::size_t pos_ = 0;
};

} // namespace detail

// Parses an expression in +, -, *, ^ with integer or a/b literals over the variables of ctx.
inline Polynomial parse_poly(std::string_view text, const ContextPtr &ctx)
{
    detail::ExprParser parser(text, *ctx, std::nullopt);
    Polynomial p(ctx);
    for (const auto &[e, c] : parser.parse()) {
        p.add_term(e, c);
    }
    return p;
}

inline Polynomial parse_poly(std::string_view text, const std::vector<std::string> &names)
{
    return parse_poly(text, make_context(names));
}

// Like parse_poly, but x may carry negative exponents (written x^-k).
inline LaurentForm parse_laurent(std::string_view text, const ContextPtr &ctx, std::size_t x_index)
{
    detail::ExprParser parser(text, *ctx, x_index);
    LaurentForm f(ctx, x_index);
    for (const auto &[e, c] : parser.parse()) {
        Exponents rest = e;
        const std::int64_t k = rest[x_index];
        rest[x_index] = 0;
        f.add_entry(k, Polynomial::monomial(ctx, std::move(rest), c));
    }
    return f;
}

} // namespace ddlab

#endif
