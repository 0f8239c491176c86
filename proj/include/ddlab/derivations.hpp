#ifndef DDLAB_DERIVATIONS_HPP
#define DDLAB_DERIVATIONS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "errors.hpp"
#include "laurent.hpp"
#include "polynomial.hpp"
#include "report.hpp"

namespace ddlab
{

inline std::vector<std::string> generator_names(const AlgebraContext &alg)
{
    std::vector<std::string> out{"x", "y", "z", "t"};
    for (std::size_t i = 1; i <= alg.adjoined(); ++i) {
        out.push_back("w" + std::to_string(i));
    }
    return out;
}

// A derivation of B[W] given by the images of x, y, z, t, W1..Wn; U, V and the base ring go to 0.
struct Derivation {
    AlgebraPtr alg;
    std::vector<BElement> images;

    std::size_t generator_count() const { return images.size(); }

    // Leibniz rule on the generator witness of a.
    BElement apply(const BElement &a) const
    {
        if (!a.has_witness()) {
            throw error("cannot differentiate an element without a generator expression");
        }
        const Polynomial &g = a.witness();
        Polynomial out(alg->ctx());
        for (std::size_t v = 0; v < images.size(); ++v) {
            if (!g.involves(v) || images[v].is_zero()) {
                continue;
            }
            out += g.derivative(v) * images[v].witness();
        }
        return BElement::from_gen(alg, alg->compact(out));
    }
};

inline Derivation make_derivation(const AlgebraPtr &alg, const std::vector<std::string> &images)
{
    if (images.size() != 4 + alg->adjoined()) {
        throw error("derivation needs one image per generator");
    }
    Derivation D{alg, {}};
    for (const auto &s : images) {
        D.images.push_back(BElement::from_gen(alg, s));
    }
    return D;
}

// D(x) = 0, D(z) = x^(d+e), D(y) = dP/dz * x^e, D(t) = dQ/dy * dP/dz + dQ/dz * x^d, D(W_i) = -x.
inline Derivation canonical_lnd(const AlgebraPtr &alg)
{
    const auto x = alg->var(kX);
    const Polynomial dPz = alg->P().derivative(kZ);
    Derivation D{alg, {}};
    D.images.push_back(BElement::constant(alg, 0));
    D.images.push_back(BElement::from_gen(alg, dPz * x.pow(alg->e())));
    D.images.push_back(BElement::from_gen(alg, x.pow(alg->d() + alg->e())));
    D.images.push_back(BElement::from_gen(alg, alg->Q().derivative(kY) * dPz + alg->Q().derivative(kZ) * x.pow(alg->d())));
    for (std::size_t i = 0; i < alg->adjoined(); ++i) {
        D.images.push_back(BElement::from_gen(alg, -x));
    }
    return D;
}

// D applied to a polynomial relation through its partial derivatives, in the Laurent ring.
inline LaurentForm derivation_of_relation(const Derivation &D, const Polynomial &rel)
{
    LaurentForm acc(D.alg->ctx(), kX);
    for (std::size_t v = 0; v < D.images.size(); ++v) {
        if (rel.involves(v) && !D.images[v].is_zero()) {
            acc += D.alg->to_laurent(rel.derivative(v)) * D.images[v].laurent();
        }
    }
    return acc;
}

inline Report derivation_report(const Derivation &D)
{
    Report rep;
    const auto ry = derivation_of_relation(D, D.alg->relation_y());
    rep.add("D(X^d*Y - P) = 0", ry.is_zero(), ry.is_zero() ? "" : "Laurent form " + ry.to_string());
    const auto rt = derivation_of_relation(D, D.alg->relation_t());
    rep.add("D(X^e*T - Q) = 0", rt.is_zero(), rt.is_zero() ? "" : "Laurent form " + rt.to_string());
    return rep;
}

inline bool check_derivation_well_defined(const Derivation &D) { return derivation_report(D).passed(); }

struct NilpotencyResult {
    bool cap_exceeded = false;
    int index = -1;                 // smallest n with D^n(a) != 0 and D^(n+1)(a) = 0; -1 for a = 0
    std::vector<BElement> iterates; // a, D(a), ..., D^index(a)
};

inline NilpotencyResult nilpotency_index(const Derivation &D, const BElement &a, int cap = 64)
{
    NilpotencyResult out;
    if (a.is_zero()) {
        return out;
    }
    BElement cur = a;
    for (int n = 0; n <= cap; ++n) {
        out.iterates.push_back(cur);
        BElement next = D.apply(cur);
        if (next.is_zero()) {
            out.index = n;
            return out;
        }
        cur = std::move(next);
    }
    out.cap_exceeded = true;
    return out;
}

// delta_U(g) = sum_i coefficients[g][i] * U^i for every generator g of B[W].
struct ExponentialMap {
    AlgebraPtr alg;
    std::vector<std::vector<BElement>> coefficients;

    // delta applied to generator g with parameter variable `param` (U or V).
    BElement generator_image(std::size_t g, std::size_t param) const
    {
        const Polynomial p = alg->var(param);
        Polynomial gen(alg->ctx());
        LaurentForm lau(alg->ctx(), kX);
        bool witnessed = true;
        for (std::size_t i = 0; i < coefficients[g].size(); ++i) {
            const auto &c = coefficients[g][i];
            const Polynomial pi = p.pow(static_cast<unsigned>(i));
            lau += c.laurent().mul_coefficient(pi);
            if (c.has_witness()) {
                gen += c.witness() * pi;
            } else {
                witnessed = false;
            }
        }
        if (witnessed) {
            return BElement::with_witness(alg, gen, lau);
        }
        return BElement::from_laurent(alg, lau);
    }

    std::vector<std::optional<LaurentForm>> laurent_images(std::size_t param) const
    {
        std::vector<std::optional<LaurentForm>> img(alg->ctx()->size());
        for (std::size_t i = 0; i < img.size(); ++i) {
            if (i < coefficients.size()) {
                img[i] = generator_image(i, param).laurent();
            } else {
                img[i] = LaurentForm::from_polynomial(alg->var(i), kX);
            }
        }
        return img;
    }

    // delta applied to an element through its generator witness.
    BElement apply(const BElement &a, std::size_t param) const
    {
        if (!a.has_witness()) {
            throw error("exponential map needs a generator expression for the element");
        }
        return BElement::from_laurent(alg, evaluate_polynomial(a.witness(), laurent_images(param), alg->ctx(), kX));
    }

    // delta applied to an element of the Laurent ring, extended through x, z, W and the base ring.
    // Valid once delta is a homomorphism on B and delta(x) is a unit monomial.
    LaurentForm apply_laurent(const LaurentForm &f, std::size_t param) const
    {
        auto img = laurent_images(param);
        const LaurentForm x_image = *img[kX];
        img[kX] = LaurentForm::x_power(alg->ctx(), kX, 1);
        img[kY] = std::nullopt;
        img[kT] = std::nullopt;
        return substitute_laurent(f, x_image, img, alg->ctx(), kX);
    }
};

// exp(D): coefficient i of generator g is D^i(g) / i!.
inline ExponentialMap exp_map(const Derivation &D, int cap = 64)
{
    ExponentialMap out{D.alg, {}};
    const auto names = generator_names(*D.alg);
    for (std::size_t g = 0; g < D.images.size(); ++g) {
        auto nil = nilpotency_index(D, BElement::generator(D.alg, g), cap);
        if (nil.cap_exceeded) {
            throw error("derivation is not nilpotent on " + names[g] + " within " + std::to_string(cap) + " steps");
        }
        std::vector<BElement> coeffs;
        for (std::size_t i = 0; i < nil.iterates.size(); ++i) {
            coeffs.push_back(nil.iterates[i] * (Rational(1) / factorial(static_cast<unsigned>(i))));
        }
        out.coefficients.push_back(std::move(coeffs));
    }
    return out;
}

inline ExponentialMap make_exponential_map(const AlgebraPtr &alg, const std::vector<std::vector<std::string>> &coeffs)
{
    if (coeffs.size() != 4 + alg->adjoined()) {
        throw error("exponential map needs a coefficient list per generator");
    }
    ExponentialMap out{alg, {}};
    for (const auto &list : coeffs) {
        std::vector<BElement> c;
        for (const auto &s : list) {
            c.push_back(BElement::from_gen(alg, s));
        }
        out.coefficients.push_back(std::move(c));
    }
    return out;
}

inline Report exp_axioms_report(const ExponentialMap &delta)
{
    Report rep;
    const auto &alg = delta.alg;
    const auto names = generator_names(*alg);
    const auto U = alg->u_index(), V = alg->v_index();

    const auto imgU = delta.laurent_images(U);
    bool hom = true;
    for (const auto &[name, rel] : {std::pair<std::string, Polynomial>{"X^d*Y - P", alg->relation_y()},
                                    std::pair<std::string, Polynomial>{"X^e*T - Q", alg->relation_t()}}) {
        const auto l = evaluate_polynomial(rel, imgU, alg->ctx(), kX);
        hom = hom && l.is_zero();
        rep.add("delta(" + name + ") = 0", l.is_zero(), l.is_zero() ? "" : "Laurent form " + l.to_string());
    }

    for (std::size_t g = 0; g < delta.coefficients.size(); ++g) {
        const auto &c = delta.coefficients[g];
        const bool ok = !c.empty() && c.front() == BElement::generator(alg, g);
        rep.add("epsilon_0 delta(" + names[g] + ") = " + names[g], ok, c.empty() ? "empty coefficient list" : c.front().to_string());
    }

    // delta_V(delta_U(g)) = delta_{U+V}(g), both sides in B[W][U, V].
    const auto imgV = delta.laurent_images(V);
    const bool laurent_route = hom && imgV[kX]->is_unit_monomial();
    const Polynomial uv = alg->var(U) + alg->var(V);
    for (std::size_t g = 0; g < delta.coefficients.size(); ++g) {
        const auto &c = delta.coefficients[g];
        LaurentForm lhs(alg->ctx(), kX), rhs(alg->ctx(), kX);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Polynomial ui = alg->var(U).pow(static_cast<unsigned>(i));
            LaurentForm dv = laurent_route ? delta.apply_laurent(c[i].laurent(), V) : delta.apply(c[i], V).laurent();
            lhs += dv.mul_coefficient(ui);
            rhs += c[i].laurent().mul_coefficient(uv.pow(static_cast<unsigned>(i)));
        }
        const bool ok = lhs == rhs;
        rep.add("delta_V delta_U(" + names[g] + ") = delta_(U+V)(" + names[g] + ")", ok,
                ok ? "" : "difference " + (lhs - rhs).to_string());
    }
    return rep;
}

inline bool check_exp_axioms(const ExponentialMap &delta) { return exp_axioms_report(delta).passed(); }

// deg_U(delta(a)); std::nullopt stands for -infinity (a = 0).
inline std::optional<int> deg_delta(const ExponentialMap &delta, const BElement &a)
{
    if (!a.has_witness()) {
        throw error("deg_delta needs a generator expression for the element");
    }
    const auto img = delta.apply(a, delta.alg->u_index());
    if (img.is_zero()) {
        return std::nullopt;
    }
    return img.laurent().degree_in(delta.alg->u_index());
}

struct MLReport {
    DDPresentation presentation;
    Report hypotheses;
    Report direct_facts;
    std::optional<std::string> conclusion;
};

// Checks the hypotheses under which the Makar-Limanov invariant of B is known to be R[x], verifies
// directly that the canonical derivation kills R[x], and only then states the known result.
inline MLReport ml_report(const DDPresentation &p, int cap = 64)
{
    MLReport out{p, {}, {}, std::nullopt};
    const auto val = validate_presentation(p);
    out.hypotheses.append(val);
    if (!val.passed()) {
        return out;
    }
    auto alg = make_algebra(p, 0);
    auto D = canonical_lnd(alg);
    const auto well = derivation_report(D);
    out.direct_facts.append(well, "canonical D: ");
    const bool dx = D.apply(BElement::generator(alg, kX)).is_zero();
    out.direct_facts.add("D(x) = 0", dx);
    bool dr = true;
    for (std::size_t i = 0; i < p.base_vars.size(); ++i) {
        dr = dr && D.apply(BElement::generator(alg, alg->v_index() + 1 + i)).is_zero();
    }
    out.direct_facts.add("D vanishes on R", dr, p.base_vars.empty() ? "R = Q" : "");
    bool nilpotent = true;
    for (std::size_t g = 0; g < 4; ++g) {
        nilpotent = nilpotent && !nilpotency_index(D, BElement::generator(alg, g), cap).cap_exceeded;
    }
    out.direct_facts.add("D is locally nilpotent on x, y, z, t", nilpotent);
    const bool nonzero = !D.images[kZ].is_zero();
    out.direct_facts.add("D(z) != 0, so ker D is a proper subring", nonzero);
    out.direct_facts.add("R[x] is contained in ker D, hence ML_R(B) is contained in ker D", dx && dr && nilpotent && well.passed());
    if (out.direct_facts.passed()) {
        out.conclusion = "ML_R(B) = R[x] (known result for this family under r >= 1 and Q monic in Y; "
                         "not an independent computation)";
    }
    return out;
}

} // namespace ddlab

#endif
