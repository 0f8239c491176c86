#ifndef DDLAB_LAURENT_HPP
#define DDLAB_LAURENT_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"
#include "rational.hpp"

namespace ddlab
{

// Element of S[x, 1/x] where S is the polynomial ring on the context variables other than x.
// Stored as a finitely supported map x-exponent -> coefficient polynomial; zero entries are never kept.
class LaurentForm
{
public:
    using TermMap = std::map<std::int64_t, Polynomial>;

    LaurentForm() = default;
    LaurentForm(ContextPtr ctx, std::size_t x_index) : ctx_(std::move(ctx)), x_index_(x_index) {}

    // Drops zero entries; rejects coefficients that still involve x.
    static LaurentForm normalize(const ContextPtr &ctx, std::size_t x_index, const TermMap &raw)
    {
        LaurentForm r(ctx, x_index);
        for (const auto &[k, c] : raw) {
            if (c.is_zero()) {
                continue;
            }
            if (!same_context(c.ctx(), ctx)) {
                throw context_mismatch("Laurent coefficient in wrong context");
            }
            if (c.involves(x_index)) {
                throw error("Laurent coefficient involves the x variable");
            }
            r.terms_.emplace(k, c);
        }
        return r;
    }

    static LaurentForm from_polynomial(const Polynomial &p, std::size_t x_index)
    {
        LaurentForm r(p.ctx(), x_index);
        for (const auto &[e, c] : p.terms()) {
            Exponents f = e;
            const std::int64_t k = f[x_index];
            f[x_index] = 0;
            r.add_entry(k, Polynomial::monomial(p.ctx(), std::move(f), c));
        }
        return r;
    }

    static LaurentForm constant(const ContextPtr &ctx, std::size_t x_index, const Rational &c)
    {
        return from_polynomial(Polynomial::constant(ctx, c), x_index);
    }

    static LaurentForm x_power(const ContextPtr &ctx, std::size_t x_index, std::int64_t k, const Rational &c = 1)
    {
        LaurentForm r(ctx, x_index);
        r.add_entry(k, Polynomial::constant(ctx, c));
        return r;
    }

    const ContextPtr &ctx() const noexcept { return ctx_; }
    std::size_t x_index() const noexcept { return x_index_; }
    const TermMap &terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    std::int64_t min_exponent() const
    {
        if (terms_.empty()) {
            throw error("min exponent of zero Laurent form");
        }
        return terms_.begin()->first;
    }

    std::int64_t max_exponent() const
    {
        if (terms_.empty()) {
            throw error("max exponent of zero Laurent form");
        }
        return terms_.rbegin()->first;
    }

    Polynomial coefficient(std::int64_t k) const
    {
        auto it = terms_.find(k);
        return it == terms_.end() ? Polynomial(ctx_) : it->second;
    }

    void add_entry(std::int64_t k, const Polynomial &c)
    {
        if (c.is_zero()) {
            return;
        }
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
            return;
        }
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }

    LaurentForm &operator+=(const LaurentForm &o)
    {
        check(o);
        for (const auto &[k, c] : o.terms_) {
            add_entry(k, c);
        }
        return *this;
    }

    LaurentForm &operator-=(const LaurentForm &o)
    {
        check(o);
        for (const auto &[k, c] : o.terms_) {
            add_entry(k, -c);
        }
        return *this;
    }

    friend LaurentForm operator+(LaurentForm a, const LaurentForm &b) { return a += b; }
    friend LaurentForm operator-(LaurentForm a, const LaurentForm &b) { return a -= b; }

    LaurentForm operator-() const
    {
        LaurentForm r(*this);
        for (auto &[k, c] : r.terms_) {
            c = -c;
        }
        return r;
    }

    LaurentForm &operator*=(const Rational &s)
    {
        if (s == 0) {
            terms_.clear();
        }
        for (auto &[k, c] : terms_) {
            c *= s;
        }
        return *this;
    }

    friend LaurentForm operator*(LaurentForm a, const Rational &s) { return a *= s; }
    friend LaurentForm operator*(const Rational &s, LaurentForm a) { return a *= s; }

    friend LaurentForm operator*(const LaurentForm &a, const LaurentForm &b)
    {
        a.check(b);
        LaurentForm r(a.ctx_, a.x_index_);
        for (const auto &[ka, ca] : a.terms_) {
            for (const auto &[kb, cb] : b.terms_) {
                r.add_entry(detail::checked_add64(ka, kb), ca * cb);
            }
        }
        return r;
    }

    LaurentForm &operator*=(const LaurentForm &o) { return *this = *this * o; }

    // Multiplication by a polynomial free of x.
    LaurentForm mul_coefficient(const Polynomial &p) const
    {
        LaurentForm r(ctx_, x_index_);
        if (p.is_zero()) {
            return r;
        }
        for (const auto &[k, c] : terms_) {
            r.add_entry(k, c * p);
        }
        return r;
    }

    // Multiplication by x^k.
    LaurentForm shift(std::int64_t k) const
    {
        LaurentForm r(ctx_, x_index_);
        for (const auto &[e, c] : terms_) {
            r.terms_.emplace(detail::checked_add64(e, k), c);
        }
        return r;
    }

    LaurentForm pow(unsigned n) const
    {
        LaurentForm result = constant(ctx_, x_index_, 1);
        LaurentForm base = *this;
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

    // True for c * x^k with c a nonzero rational: the units of S[x, 1/x] over Q.
    bool is_unit_monomial() const
    {
        return terms_.size() == 1 && terms_.begin()->second.is_constant();
    }

    LaurentForm inverse_unit() const
    {
        if (!is_unit_monomial()) {
            throw error("Laurent form is not a unit monomial");
        }
        const auto &[k, c] = *terms_.begin();
        return x_power(ctx_, x_index_, -k, Rational(1) / c.constant_value());
    }

    // x^shift * this as a polynomial in the full context; requires every exponent to become >= 0.
    Polynomial to_polynomial(std::int64_t shift_by = 0) const
    {
        Polynomial r(ctx_);
        for (const auto &[k, c] : terms_) {
            const std::int64_t e = detail::checked_add64(k, shift_by);
            if (e < 0) {
                throw error("Laurent form has negative x-exponent after shift");
            }
            Exponents ex(ctx_->size(), 0);
            ex[x_index_] = detail::narrow_exponent(e);
            r += c.mul_term(ex, 1);
        }
        return r;
    }

    // Largest degree in a coefficient variable over all entries; -1 for zero.
    int degree_in(std::size_t idx) const
    {
        int d = -1;
        for (const auto &[k, c] : terms_) {
            d = std::max(d, c.degree_in(idx));
        }
        return d;
    }

    // Coefficient of v^j, for a coefficient variable v.
    LaurentForm coefficient_in(std::size_t idx, int j) const
    {
        LaurentForm r(ctx_, x_index_);
        for (const auto &[k, c] : terms_) {
            r.add_entry(k, c.coefficient_in(idx, j));
        }
        return r;
    }

    bool operator==(const LaurentForm &o) const
    {
        return same_context(ctx_, o.ctx_) && x_index_ == o.x_index_ && terms_ == o.terms_;
    }
    bool operator!=(const LaurentForm &o) const { return !(*this == o); }

    std::string to_string() const
    {
        std::string out = "{";
        bool first = true;
        for (const auto &[k, c] : terms_) {
            if (!first) {
                out += ", ";
            }
            first = false;
            out += std::to_string(k) + ": " + c.to_string();
        }
        return out + "}";
    }

private:
    void check(const LaurentForm &o) const
    {
        if (!same_context(ctx_, o.ctx_) || x_index_ != o.x_index_) {
            throw context_mismatch("Laurent forms live in different contexts");
        }
    }

    ContextPtr ctx_;
    std::size_t x_index_ = 0;
    TermMap terms_;
};

inline std::string to_string(const LaurentForm &f) { return f.to_string(); }

namespace detail
{

// Horner evaluation of polynomials under a fixed homomorphism into a Laurent ring; powers of the images are
// cached across calls.
class LaurentEvaluator
{
  public:
    LaurentEvaluator(const ContextPtr &source, const std::vector<std::optional<LaurentForm>> &images,
                     const ContextPtr &target, std::size_t target_x)
        : source_(source), images_(images), target_(target), target_x_(target_x), base_(source->size()),
          cache_(source->size())
    {
        if (images.size() != source->size()) {
            throw context_mismatch("homomorphism image count does not match context");
        }
    }

    LaurentForm operator()(const Polynomial &p)
    {
        if (!same_context(p.ctx(), source_)) {
            throw context_mismatch("polynomial lives in a different context");
        }
        std::vector<const std::pair<const Exponents, Rational> *> terms;
        terms.reserve(p.num_terms());
        for (const auto &t : p.terms()) {
            terms.push_back(&t);
        }
        return eval(terms, 0);
    }

  private:
    using TermRefs = std::vector<const std::pair<const Exponents, Rational> *>;

    const LaurentForm &power(std::size_t i, int k)
    {
        auto &pw = cache_[i];
        if (pw.empty()) {
            if (images_[i]) {
                base_[i] = *images_[i];
            } else {
                base_[i] = LaurentForm::from_polynomial(
                    Polynomial::variable(target_, target_->require(source_->name(i))), target_x_);
            }
            pw.push_back(LaurentForm::constant(target_, target_x_, 1));
        }
        while (static_cast<int>(pw.size()) <= k) {
            pw.push_back(pw.back() * base_[i]);
        }
        return pw[k];
    }

    LaurentForm eval(const TermRefs &terms, std::size_t i)
    {
        LaurentForm acc(target_, target_x_);
        if (terms.empty()) {
            return acc;
        }
        while (i < source_->size()) {
            bool used = false;
            for (const auto *t : terms) {
                used = used || t->first[i] != 0;
            }
            if (used) {
                break;
            }
            ++i;
        }
        if (i == source_->size()) {
            Rational c = 0;
            for (const auto *t : terms) {
                c += t->second;
            }
            return LaurentForm::constant(target_, target_x_, c);
        }
        std::map<int, TermRefs, std::greater<>> groups;
        for (const auto *t : terms) {
            groups[t->first[i]].push_back(t);
        }
        int prev = groups.begin()->first;
        for (const auto &[k, group] : groups) {
            if (!acc.is_zero() && prev > k) {
                acc *= power(i, prev - k);
            }
            acc += eval(group, i + 1);
            prev = k;
        }
        if (prev > 0 && !acc.is_zero()) {
            acc *= power(i, prev);
        }
        return acc;
    }

    ContextPtr source_;
    const std::vector<std::optional<LaurentForm>> &images_;
    ContextPtr target_;
    std::size_t target_x_;
    std::vector<LaurentForm> base_;
    std::vector<std::vector<LaurentForm>> cache_;
};

} // namespace detail

// Evaluates a polynomial under a ring homomorphism into a Laurent ring. images[i] is the image of
// variable i of p's context; an empty entry maps the variable to the same-named variable of target.
inline LaurentForm evaluate_polynomial(const Polynomial &p, const std::vector<std::optional<LaurentForm>> &images,
                                       const ContextPtr &target, std::size_t target_x)
{
    return detail::LaurentEvaluator(p.ctx(), images, target, target_x)(p);
}

// Applies a homomorphism of Laurent rings: coefficient variables are evaluated through images,
// and x^k goes to x_image^k. Negative exponents need x_image to be a unit monomial.
inline LaurentForm substitute_laurent(const LaurentForm &f, const LaurentForm &x_image,
                                      const std::vector<std::optional<LaurentForm>> &images, const ContextPtr &target,
                                      std::size_t target_x)
{
    LaurentForm result(target, target_x);
    if (f.is_zero()) {
        return result;
    }
    const bool simple_x = x_image.is_unit_monomial();
    detail::LaurentEvaluator eval(f.ctx(), images, target, target_x);
    for (const auto &[k, c] : f.terms()) {
        LaurentForm xk(target, target_x);
        if (simple_x) {
            const auto &[kx, cx] = *x_image.terms().begin();
            xk = LaurentForm::x_power(target, target_x, detail::checked_mul64(kx, k),
                                      rational_pow(cx.constant_value(), static_cast<long>(k)));
        } else if (k >= 0) {
            xk = x_image.pow(static_cast<unsigned>(k));
        } else {
            throw error("negative x-power under a homomorphism whose x-image is not a unit");
        }
        result += xk * eval(c);
    }
    return result;
}

} // namespace ddlab

#endif
