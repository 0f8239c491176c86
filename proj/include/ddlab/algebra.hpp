#ifndef DDLAB_ALGEBRA_HPP
#define DDLAB_ALGEBRA_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "groebner.hpp"
#include "laurent.hpp"
#include "polynomial.hpp"
#include "presentation.hpp"

namespace ddlab
{

// B[W1..Wn] for a presentation B. Variables are laid out as
// [X, Y, Z, T, W1..Wn, U, V, base variables...]; U and V are exponential-map parameters.
class AlgebraContext
{
public:
    AlgebraContext(DDPresentation pres, std::size_t adjoined, MonomialOrder::Kind membership_order = MonomialOrder::Kind::grevlex,
                   std::size_t budget = 100000)
        : pres_(std::move(pres)), n_(adjoined), order_kind_(membership_order), budget_(budget)
    {
        require_valid(pres_);
        std::vector<std::string> names{"X", "Y", "Z", "T"};
        for (std::size_t i = 1; i <= n_; ++i) {
            names.push_back("W" + std::to_string(i));
        }
        names.push_back("U");
        names.push_back("V");
        for (const auto &u : pres_.base_vars) {
            names.push_back(u);
        }
        ctx_ = make_context(std::move(names));
        P_ = pres_.P.embed(ctx_);
        Q_ = pres_.Q.embed(ctx_);

        images_.resize(ctx_->size());
        for (std::size_t i = 0; i < ctx_->size(); ++i) {
            if (i != kY && i != kT) {
                images_[i] = i == kX ? LaurentForm::x_power(ctx_, kX, 1)
                                     : LaurentForm::from_polynomial(Polynomial::variable(ctx_, i), kX);
            }
        }
        images_[kY] = LaurentForm::from_polynomial(P_, kX).shift(-pres_.d);
        images_[kT] = evaluate_polynomial(Q_, images_, ctx_, kX).shift(-pres_.e);
    }

    const DDPresentation &presentation() const noexcept { return pres_; }
    const ContextPtr &ctx() const noexcept { return ctx_; }
    std::size_t adjoined() const noexcept { return n_; }
    std::size_t budget() const noexcept { return budget_; }
    int d() const noexcept { return pres_.d; }
    int e() const noexcept { return pres_.e; }

    std::size_t w_index(std::size_t i) const { return 4 + i; } // i is zero-based
    std::size_t u_index() const { return 4 + n_; }
    std::size_t v_index() const { return 5 + n_; }

    // P and Q re-expressed in this context.
    const Polynomial &P() const noexcept { return P_; }
    const Polynomial &Q() const noexcept { return Q_; }

    Polynomial var(std::size_t idx) const { return Polynomial::variable(ctx_, idx); }
    Polynomial relation_y() const { return var(kX).pow(pres_.d) * var(kY) - P_; }
    Polynomial relation_t() const { return var(kX).pow(pres_.e) * var(kT) - Q_; }

    const std::vector<std::optional<LaurentForm>> &laurent_images() const noexcept { return images_; }

    LaurentForm to_laurent(const Polynomial &g) const
    {
        if (!same_context(g.ctx(), ctx_)) {
            throw context_mismatch("generator expression lives in a different context");
        }
        return evaluate_polynomial(g, images_, ctx_, kX);
    }

    // Reduced Groebner basis of (X^N, X^d*Y - P, X^e*T - Q) with the X^N column tracked.
    std::shared_ptr<const GroebnerBasis> membership_basis(int N) const
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(N);
        if (it != cache_.end()) {
            return it->second;
        }
        GroebnerOptions opts;
        opts.budget = budget_;
        opts.track = {true, false, false};
        if (order_kind_ == MonomialOrder::Kind::lex) {
            opts.order = MonomialOrder::lex(ctx_->size());
        }
        auto gb = std::make_shared<const GroebnerBasis>(buchberger({var(kX).pow(N), relation_y(), relation_t()}, opts));
        cache_.emplace(N, gb);
        return gb;
    }

    // Rewrites X^e*T -> Q and X^d*Y -> P (lex with T > Y > X > Z > ...). The result represents the same
    // element of B and is usually much smaller than the raw Leibniz expansion.
    Polynomial compact(const Polynomial &g) const
    {
        std::vector<std::size_t> priority{kT, kY, kX, kZ};
        for (std::size_t i = 4; i < ctx_->size(); ++i) {
            priority.push_back(i);
        }
        auto order = MonomialOrder::with_priority(MonomialOrder::Kind::lex, priority);
        return reduce_by(g, {relation_t(), relation_y()}, order, 10 * budget_).remainder;
    }

private:
    DDPresentation pres_;
    std::size_t n_;
    MonomialOrder::Kind order_kind_;
    std::size_t budget_;
    ContextPtr ctx_;
    Polynomial P_, Q_;
    std::vector<std::optional<LaurentForm>> images_;
    mutable std::mutex mutex_;
    mutable std::map<int, std::shared_ptr<const GroebnerBasis>> cache_;
};

using AlgebraPtr = std::shared_ptr<const AlgebraContext>;

inline AlgebraPtr make_algebra(const DDPresentation &p, std::size_t adjoined = 0,
                               MonomialOrder::Kind order = MonomialOrder::Kind::grevlex, std::size_t budget = 100000)
{
    return std::make_shared<const AlgebraContext>(p, adjoined, order, budget);
}

// Element of B[W]: an optional generator expression and its Laurent form, which decides equality.
class BElement
{
public:
    BElement() = default;

    static BElement from_gen(const AlgebraPtr &alg, const Polynomial &g)
    {
        const Polynomial gg = g.embed(alg->ctx());
        return BElement(alg, gg, alg->to_laurent(gg));
    }

    static BElement from_gen(const AlgebraPtr &alg, const std::string &text)
    {
        return from_gen(alg, parse_poly(text, alg->ctx()));
    }

    static BElement from_laurent(const AlgebraPtr &alg, LaurentForm f)
    {
        if (!same_context(f.ctx(), alg->ctx()) || f.x_index() != kX) {
            throw context_mismatch("Laurent form lives in a different context");
        }
        return BElement(alg, std::nullopt, std::move(f));
    }

    // Trusted constructor: the caller guarantees laurent == to_laurent(gen).
    static BElement with_witness(const AlgebraPtr &alg, Polynomial gen, LaurentForm laurent)
    {
        return BElement(alg, std::move(gen), std::move(laurent));
    }

    static BElement generator(const AlgebraPtr &alg, std::size_t idx) { return from_gen(alg, alg->var(idx)); }
    static BElement constant(const AlgebraPtr &alg, const Rational &c)
    {
        return from_gen(alg, Polynomial::constant(alg->ctx(), c));
    }

    const AlgebraPtr &algebra() const noexcept { return alg_; }
    const std::optional<Polynomial> &gen() const noexcept { return gen_; }
    const LaurentForm &laurent() const noexcept { return laurent_; }
    bool has_witness() const noexcept { return gen_.has_value(); }
    bool is_zero() const { return laurent_.is_zero(); }

    const Polynomial &witness() const
    {
        if (!gen_) {
            throw error("element has no generator expression");
        }
        return *gen_;
    }

    BElement operator+(const BElement &o) const { return combine(o, laurent_ + o.laurent_, [](auto &a, auto &b) { return a + b; }); }
    BElement operator-(const BElement &o) const { return combine(o, laurent_ - o.laurent_, [](auto &a, auto &b) { return a - b; }); }
    BElement operator*(const BElement &o) const { return combine(o, laurent_ * o.laurent_, [](auto &a, auto &b) { return a * b; }); }
    BElement operator-() const { return BElement(alg_, gen_ ? std::optional<Polynomial>(-*gen_) : std::nullopt, -laurent_); }
    BElement operator*(const Rational &c) const
    {
        return BElement(alg_, gen_ ? std::optional<Polynomial>(*gen_ * c) : std::nullopt, laurent_ * c);
    }

    BElement pow(unsigned n) const
    {
        return BElement(alg_, gen_ ? std::optional<Polynomial>(gen_->pow(n)) : std::nullopt, laurent_.pow(n));
    }

    bool operator==(const BElement &o) const
    {
        check(o);
        return laurent_ == o.laurent_;
    }
    bool operator!=(const BElement &o) const { return !(*this == o); }

    std::string to_string() const { return gen_ ? gen_->to_string() : laurent_.to_string(); }

private:
    BElement(AlgebraPtr alg, std::optional<Polynomial> gen, LaurentForm laurent)
        : alg_(std::move(alg)), gen_(std::move(gen)), laurent_(std::move(laurent))
    {
    }

    void check(const BElement &o) const
    {
        if (alg_.get() != o.alg_.get()) {
            throw context_mismatch("elements of different algebras");
        }
    }

    template <class Op>
    BElement combine(const BElement &o, LaurentForm l, Op op) const
    {
        check(o);
        std::optional<Polynomial> g;
        if (gen_ && o.gen_) {
            g = op(*gen_, *o.gen_);
        }
        return BElement(alg_, std::move(g), std::move(l));
    }

    AlgebraPtr alg_;
    std::optional<Polynomial> gen_;
    LaurentForm laurent_;
};

inline bool eq_elements(const BElement &a, const BElement &b) { return a == b; }

struct Membership {
    bool member = false;
    std::optional<Polynomial> witness;
    int shift = 0;               // N with x^N * f polynomial
    Polynomial remainder;        // normal form of x^N f modulo (X^N) + I when not a member
    std::vector<Polynomial> basis; // the certificate basis when not a member
};

// f lies in B[W] iff g = x^N f, read as a polynomial, lies in (X^N) + I; the X^N cofactor is a witness.
inline Membership membership_with_witness(const AlgebraContext &alg, const LaurentForm &f)
{
    if (!alg.presentation().base_vars.empty()) {
        throw unsupported("membership is only implemented over R = Q (no base variables)");
    }
    if (!same_context(f.ctx(), alg.ctx())) {
        throw context_mismatch("Laurent form lives in a different context");
    }
    Membership out;
    if (f.is_zero()) {
        out.member = true;
        out.witness = Polynomial(alg.ctx());
        return out;
    }
    const std::int64_t lo = f.min_exponent();
    if (lo >= 0) {
        out.member = true;
        out.witness = f.to_polynomial();
        return out;
    }
    if (lo < -1000000) {
        throw overflow_error("x-exponent too negative for membership");
    }
    const int N = static_cast<int>(-lo);
    out.shift = N;
    const Polynomial g = f.to_polynomial(N);
    auto gb = alg.membership_basis(N);
    auto nf = normal_form_with_cofactors(g, *gb, 100 * alg.budget());
    if (!nf.remainder.is_zero()) {
        out.remainder = nf.remainder;
        out.basis = gb->basis;
        return out;
    }
    Polynomial h(alg.ctx());
    for (std::size_t j = 0; j < gb->basis.size(); ++j) {
        if (!nf.cofactors[j].is_zero() && !gb->cofactors[j][0].is_zero()) {
            h += nf.cofactors[j] * gb->cofactors[j][0];
        }
    }
    h = alg.compact(h);
    if (alg.to_laurent(h) != f) {
        throw error("internal error: membership witness does not reproduce its Laurent form");
    }
    out.member = true;
    out.witness = std::move(h);
    return out;
}

inline Membership membership_with_witness(const AlgebraPtr &alg, const LaurentForm &f)
{
    return membership_with_witness(*alg, f);
}

// The element q with x^n * q = a, carrying a generator witness. With a witness G of a, q is the X^n cofactor
// of G in (X^n, X^d*Y - P, X^e*T - Q).
inline BElement divide_by_x_power(const BElement &a, int n)
{
    const auto &alg = a.algebra();
    const LaurentForm target = a.laurent().shift(-n);
    if (!a.has_witness()) {
        auto m = membership_with_witness(*alg, target);
        if (!m.member) {
            throw divisibility_error("element is not divisible by x^" + std::to_string(n)
                                     + " in the algebra; normal form of the obstruction is " + m.remainder.to_string());
        }
        return BElement::with_witness(alg, *m.witness, target);
    }
    if (!alg->presentation().base_vars.empty()) {
        throw unsupported("division by x is only implemented over R = Q (no base variables)");
    }
    auto gb = alg->membership_basis(n);
    auto nf = normal_form_with_cofactors(a.witness(), *gb, 100 * alg->budget());
    if (!nf.remainder.is_zero()) {
        throw divisibility_error("element is not divisible by x^" + std::to_string(n)
                                 + " in the algebra; normal form of the obstruction is " + nf.remainder.to_string());
    }
    Polynomial h(alg->ctx());
    for (std::size_t j = 0; j < gb->basis.size(); ++j) {
        if (!nf.cofactors[j].is_zero() && !gb->cofactors[j][0].is_zero()) {
            h += nf.cofactors[j] * gb->cofactors[j][0];
        }
    }
    h = alg->compact(h);
    if (alg->to_laurent(h) != target) {
        throw error("internal error: quotient witness does not reproduce its Laurent form");
    }
    return BElement::with_witness(alg, h, target);
}

} // namespace ddlab

#endif
