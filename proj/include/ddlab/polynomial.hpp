#ifndef DDLAB_POLYNOMIAL_HPP
#define DDLAB_POLYNOMIAL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace ddlab
{

// Ordered list of variable names. Polynomials built over equal name lists are compatible.
class VarContext
{
public:
    explicit VarContext(std::vector<std::string> names) : names_(std::move(names))
    {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (names_[i] == names_[j]) {
                    throw error("duplicate variable name '" + names_[i] + "' in context");
                }
            }
        }
    }

    std::size_t size() const noexcept { return names_.size(); }
    const std::string &name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string> &names() const noexcept { return names_; }

    std::optional<std::size_t> index_of(const std::string &name) const
    {
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (names_[i] == name) {
                return i;
            }
        }
        return std::nullopt;
    }

    std::size_t require(const std::string &name) const
    {
        if (auto i = index_of(name)) {
            return *i;
        }
        throw error("variable '" + name + "' not in context");
    }

    bool operator==(const VarContext &other) const { return names_ == other.names_; }

private:
    std::vector<std::string> names_;
};

using ContextPtr = std::shared_ptr<const VarContext>;

inline ContextPtr make_context(std::vector<std::string> names)
{
    return std::make_shared<const VarContext>(std::move(names));
}

inline bool same_context(const ContextPtr &a, const ContextPtr &b)
{
    return a == b || (a && b && *a == *b);
}

using Exponents = std::vector<std::int32_t>;

namespace detail
{

inline std::int32_t checked_add(std::int32_t a, std::int32_t b)
{
    std::int32_t r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw overflow_error("exponent overflow");
    }
    return r;
}

inline std::int64_t checked_add64(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw overflow_error("Laurent exponent overflow");
    }
    return r;
}

inline std::int64_t checked_mul64(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw overflow_error("exponent overflow");
    }
    return r;
}

inline std::int32_t narrow_exponent(std::int64_t e)
{
    if (e < std::numeric_limits<std::int32_t>::min() || e > std::numeric_limits<std::int32_t>::max()) {
        throw overflow_error("exponent overflow");
    }
    return static_cast<std::int32_t>(e);
}

inline Exponents add_exponents(const Exponents &a, const Exponents &b)
{
    Exponents r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = checked_add(a[i], b[i]);
    }
    return r;
}

inline std::int64_t total_degree(const Exponents &e)
{
    std::int64_t s = 0;
    for (auto v : e) {
        s += v;
    }
    return s;
}

inline bool divides(const Exponents &a, const Exponents &b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) {
            return false;
        }
    }
    return true;
}

} // namespace detail

// Graded reverse lexicographic order on the context's variable list; sorts greatest first.
struct GrevlexGreater {
    bool operator()(const Exponents &a, const Exponents &b) const
    {
        const auto da = detail::total_degree(a);
        const auto db = detail::total_degree(b);
        if (da != db) {
            return da > db;
        }
        for (std::size_t i = a.size(); i-- > 0;) {
            if (a[i] != b[i]) {
                return a[i] < b[i];
            }
        }
        return false;
    }
};

// Sparse multivariate polynomial over Q. Terms are stored greatest first in grevlex order.
class Polynomial
{
public:
    using TermMap = std::map<Exponents, Rational, GrevlexGreater>;

    Polynomial() = default;
    explicit Polynomial(ContextPtr ctx) : ctx_(std::move(ctx)) {}

    static Polynomial constant(const ContextPtr &ctx, const Rational &c)
    {
        Polynomial p(ctx);
        if (c != 0) {
            p.terms_.emplace(Exponents(ctx->size(), 0), c);
        }
        return p;
    }

    static Polynomial variable(const ContextPtr &ctx, std::size_t idx)
    {
        Exponents e(ctx->size(), 0);
        e.at(idx) = 1;
        return monomial(ctx, std::move(e), Rational(1));
    }

    static Polynomial variable(const ContextPtr &ctx, const std::string &name)
    {
        return variable(ctx, ctx->require(name));
    }

    static Polynomial monomial(const ContextPtr &ctx, Exponents e, const Rational &c)
    {
        if (e.size() != ctx->size()) {
            throw context_mismatch("exponent vector length does not match context");
        }
        for (auto v : e) {
            if (v < 0) {
                throw error("negative exponent in polynomial");
            }
        }
        Polynomial p(ctx);
        if (c != 0) {
            p.terms_.emplace(std::move(e), c);
        }
        return p;
    }

    const ContextPtr &ctx() const noexcept { return ctx_; }
    const TermMap &terms() const noexcept { return terms_; }
    std::size_t num_terms() const noexcept { return terms_.size(); }
    bool is_zero() const noexcept { return terms_.empty(); }

    bool is_constant() const
    {
        return terms_.empty()
               || (terms_.size() == 1 && detail::total_degree(terms_.begin()->first) == 0);
    }

    Rational constant_value() const
    {
        if (!is_constant()) {
            throw error("polynomial is not constant");
        }
        return terms_.empty() ? Rational(0) : terms_.begin()->second;
    }

    // Constant term (coefficient of the unit monomial).
    Rational constant_term() const
    {
        if (terms_.empty()) {
            return 0;
        }
        auto it = terms_.find(Exponents(ctx_->size(), 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }

    // Adds c * X^e; drops the entry if it cancels.
    void add_term(const Exponents &e, const Rational &c)
    {
        if (c == 0) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    Polynomial &operator+=(const Polynomial &o)
    {
        check_ctx(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }

    Polynomial &operator-=(const Polynomial &o)
    {
        check_ctx(o);
        for (const auto &[e, c] : o.terms_) {
            add_term(e, -c);
        }
        return *this;
    }

    Polynomial &operator*=(const Rational &s)
    {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto &[e, c] : terms_) {
            c *= s;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const Rational &s) { return a *= s; }
    friend Polynomial operator*(const Rational &s, Polynomial a) { return a *= s; }

    Polynomial operator-() const
    {
        Polynomial r(*this);
        for (auto &[e, c] : r.terms_) {
            c = -c;
        }
        return r;
    }

    friend Polynomial operator*(const Polynomial &a, const Polynomial &b)
    {
        a.check_ctx(b);
        Polynomial r(a.ctx_);
        if (a.is_zero() || b.is_zero()) {
            return r;
        }
        for (const auto &[ea, ca] : a.terms_) {
            for (const auto &[eb, cb] : b.terms_) {
                r.add_term(detail::add_exponents(ea, eb), ca * cb);
            }
        }
        return r;
    }

    Polynomial &operator*=(const Polynomial &o) { return *this = *this * o; }

    // Multiplies by the monomial c * X^e.
    Polynomial mul_term(const Exponents &e, const Rational &c) const
    {
        Polynomial r(ctx_);
        if (c == 0) {
            return r;
        }
        for (const auto &[ea, ca] : terms_) {
            r.terms_.emplace_hint(r.terms_.end(), detail::add_exponents(ea, e), ca * c);
        }
        return r;
    }

    Polynomial pow(unsigned n) const
    {
        Polynomial result = constant(ctx_, 1);
        Polynomial base = *this;
        while (n > 0) {
            if (n & 1U) {
                result *= base;
            }
            n >>= 1U;
            if (n > 0) {
                base = base * base;
            }
        }
        return result;
    }

    bool operator==(const Polynomial &o) const { return same_context(ctx_, o.ctx_) && terms_ == o.terms_; }
    bool operator!=(const Polynomial &o) const { return !(*this == o); }

    // Degree in one variable; -1 for the zero polynomial.
    int degree_in(std::size_t idx) const
    {
        int d = -1;
        for (const auto &[e, c] : terms_) {
            d = std::max(d, static_cast<int>(e[idx]));
        }
        return d;
    }

    std::int64_t total_degree() const
    {
        std::int64_t d = -1;
        for (const auto &[e, c] : terms_) {
            d = std::max(d, detail::total_degree(e));
        }
        return d;
    }

    bool involves(std::size_t idx) const
    {
        for (const auto &[e, c] : terms_) {
            if (e[idx] != 0) {
                return true;
            }
        }
        return false;
    }

    // Coefficient of v^k, viewed as a polynomial in the remaining variables.
    Polynomial coefficient_in(std::size_t idx, int k) const
    {
        Polynomial r(ctx_);
        for (const auto &[e, c] : terms_) {
            if (e[idx] == k) {
                Exponents f = e;
                f[idx] = 0;
                r.terms_.emplace(std::move(f), c);
            }
        }
        return r;
    }

    Polynomial derivative(std::size_t idx) const
    {
        Polynomial r(ctx_);
        for (const auto &[e, c] : terms_) {
            if (e[idx] > 0) {
                Exponents f = e;
                f[idx] -= 1;
                r.terms_.emplace(std::move(f), c * e[idx]);
            }
        }
        return r;
    }

    Polynomial derivative(std::size_t idx, unsigned times) const
    {
        Polynomial r = *this;
        for (unsigned i = 0; i < times && !r.is_zero(); ++i) {
            r = r.derivative(idx);
        }
        return r;
    }

    // Sets variable idx to the value c.
    Polynomial evaluate(std::size_t idx, const Rational &value) const
    {
        Polynomial r(ctx_);
        for (const auto &[e, c] : terms_) {
            Exponents f = e;
            f[idx] = 0;
            r.add_term(f, e[idx] == 0 ? c : c * rational_pow(value, e[idx]));
        }
        return r;
    }

    // Replaces variable idx by the polynomial s (same context).
    Polynomial substitute(std::size_t idx, const Polynomial &s) const
    {
        check_ctx(s);
        const int deg = degree_in(idx);
        if (deg <= 0) {
            return *this;
        }
        std::vector<Polynomial> powers{constant(ctx_, 1)};
        for (int k = 1; k <= deg; ++k) {
            powers.push_back(powers.back() * s);
        }
        Polynomial r(ctx_);
        for (const auto &[e, c] : terms_) {
            Exponents f = e;
            f[idx] = 0;
            r += powers[e[idx]].mul_term(f, c);
        }
        return r;
    }

    // Simultaneous substitution: images[i] replaces variable i of this context, or, when
    // empty, the variable with the same name in the target context.
    Polynomial substitute_all(const std::vector<std::optional<Polynomial>> &images, const ContextPtr &target) const
    {
        if (images.size() != ctx_->size()) {
            throw context_mismatch("substitution size does not match context");
        }
        std::vector<Polynomial> base(ctx_->size());
        for (std::size_t i = 0; i < ctx_->size(); ++i) {
            if (images[i]) {
                if (!same_context(images[i]->ctx(), target)) {
                    throw context_mismatch("substitution image in wrong context");
                }
                base[i] = *images[i];
            } else if (involves(i)) {
                base[i] = variable(target, target->require(ctx_->name(i)));
            }
        }
        std::vector<std::vector<Polynomial>> cache(ctx_->size());
        auto power = [&](std::size_t i, int k) -> const Polynomial & {
            auto &pw = cache[i];
            if (pw.empty()) {
                pw.push_back(constant(target, 1));
            }
            while (static_cast<int>(pw.size()) <= k) {
                pw.push_back(pw.back() * base[i]);
            }
            return pw[k];
        };
        Polynomial r(target);
        for (const auto &[e, c] : terms_) {
            Polynomial t = constant(target, c);
            for (std::size_t i = 0; i < e.size() && !t.is_zero(); ++i) {
                if (e[i] > 0) {
                    t *= power(i, e[i]);
                }
            }
            r += t;
        }
        return r;
    }

    // p(v + c), computed by expanding each power of v binomially.
    Polynomial taylor_shift(std::size_t idx, const Polynomial &c) const
    {
        check_ctx(c);
        const int deg = degree_in(idx);
        if (deg <= 0 || c.is_zero()) {
            return *this;
        }
        Polynomial v = variable(ctx_, idx);
        std::vector<Polynomial> cpow{constant(ctx_, 1)};
        std::vector<Polynomial> vpow{constant(ctx_, 1)};
        for (int k = 1; k <= deg; ++k) {
            cpow.push_back(cpow.back() * c);
            vpow.push_back(vpow.back() * v);
        }
        Polynomial r(ctx_);
        for (int k = 0; k <= deg; ++k) {
            Polynomial coeff = coefficient_in(idx, k);
            if (coeff.is_zero()) {
                continue;
            }
            // (v + c)^k = sum_j binom(k, j) v^j c^(k - j)
            Polynomial shifted(ctx_);
            for (int j = 0; j <= k; ++j) {
                shifted += (vpow[j] * cpow[k - j]) * binomial(k, j);
            }
            r += coeff * shifted;
        }
        return r;
    }

    // Re-expresses the polynomial in another context, matching variables by name.
    Polynomial embed(const ContextPtr &target) const
    {
        if (same_context(ctx_, target)) {
            Polynomial r(*this);
            r.ctx_ = target;
            return r;
        }
        std::vector<std::optional<std::size_t>> map(ctx_->size());
        for (std::size_t i = 0; i < ctx_->size(); ++i) {
            map[i] = target->index_of(ctx_->name(i));
        }
        Polynomial r(target);
        for (const auto &[e, c] : terms_) {
            Exponents f(target->size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) {
                    continue;
                }
                if (!map[i]) {
                    throw context_mismatch("variable '" + ctx_->name(i) + "' missing from target context");
                }
                f[*map[i]] = e[i];
            }
            r.terms_.emplace(std::move(f), c);
        }
        return r;
    }

    // Exact division by v^k; throws if some term has lower v-degree.
    Polynomial divide_by_var_power(std::size_t idx, int k) const
    {
        Polynomial r(ctx_);
        for (const auto &[e, c] : terms_) {
            if (e[idx] < k) {
                throw divisibility_error("polynomial not divisible by " + ctx_->name(idx) + "^" + std::to_string(k));
            }
            Exponents f = e;
            f[idx] -= k;
            r.terms_.emplace(std::move(f), c);
        }
        return r;
    }

    // Splits into (quotient, rest) with this = v^k * quotient + rest and deg_v(rest) < k termwise.
    std::pair<Polynomial, Polynomial> split_by_var_power(std::size_t idx, int k) const
    {
        Polynomial q(ctx_), rest(ctx_);
        for (const auto &[e, c] : terms_) {
            if (e[idx] >= k) {
                Exponents f = e;
                f[idx] -= k;
                q.terms_.emplace(std::move(f), c);
            } else {
                rest.terms_.emplace(e, c);
            }
        }
        return {q, rest};
    }

    const Exponents &leading_exponents() const
    {
        if (terms_.empty()) {
            throw error("leading term of zero polynomial");
        }
        return terms_.begin()->first;
    }

    const Rational &leading_coefficient() const
    {
        if (terms_.empty()) {
            throw error("leading term of zero polynomial");
        }
        return terms_.begin()->second;
    }

    std::string to_string() const;

private:
    void check_ctx(const Polynomial &o) const
    {
        if (!same_context(ctx_, o.ctx_)) {
            throw context_mismatch("polynomials live in different variable contexts");
        }
    }

    ContextPtr ctx_;
    TermMap terms_;
};

inline std::string monomial_to_string(const VarContext &ctx, const Exponents &e)
{
    std::string out;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) {
            continue;
        }
        if (!out.empty()) {
            out += '*';
        }
        out += ctx.name(i);
        if (e[i] != 1) {
            out += '^' + std::to_string(e[i]);
        }
    }
    return out;
}

// Canonical form: terms in grevlex order, " + " / " - " separators, coefficients as a or a/b.
inline std::string Polynomial::to_string() const
{
    if (terms_.empty()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto &[e, c] : terms_) {
        const bool neg = c < 0;
        const Rational mag = neg ? Rational(-c) : c;
        if (first) {
            if (neg) {
                out += '-';
            }
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        const std::string mono = monomial_to_string(*ctx_, e);
        if (mono.empty()) {
            out += ddlab::to_string(mag);
        } else if (mag == 1) {
            out += mono;
        } else {
            out += ddlab::to_string(mag) + "*" + mono;
        }
    }
    return out;
}

inline std::string to_string(const Polynomial &p) { return p.to_string(); }

} // namespace ddlab

#endif
