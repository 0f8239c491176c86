#ifndef DDLAB_ISOMORPHISMS_HPP
#define DDLAB_ISOMORPHISMS_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "derivations.hpp"
#include "errors.hpp"
#include "polynomial.hpp"
#include "presentation.hpp"
#include "report.hpp"

namespace ddlab
{

// R-algebra map src -> tgt given by images of x, y, z, t, W1..Wn of src. Base variables, U and V go to
// the same-named variables of tgt.
struct RHomomorphism {
    AlgebraPtr src;
    AlgebraPtr tgt;
    std::vector<BElement> images;
    bool verified = false;

    std::vector<std::optional<LaurentForm>> laurent_images() const
    {
        std::vector<std::optional<LaurentForm>> img(src->ctx()->size());
        for (std::size_t i = 0; i < images.size(); ++i) {
            img[i] = images[i].laurent();
        }
        for (std::size_t i = images.size(); i < img.size(); ++i) {
            img[i] = LaurentForm::from_polynomial(tgt->var(tgt->ctx()->require(src->ctx()->name(i))), kX);
        }
        return img;
    }

    // Image of a generator expression of src, as an element of tgt.
    BElement apply(const Polynomial &g) const
    {
        std::vector<std::optional<Polynomial>> gens(src->ctx()->size());
        bool witnessed = true;
        for (std::size_t i = 0; i < images.size(); ++i) {
            if (images[i].has_witness()) {
                gens[i] = images[i].witness();
            } else {
                witnessed = false;
            }
        }
        LaurentForm l = evaluate_polynomial(g.embed(src->ctx()), laurent_images(), tgt->ctx(), kX);
        if (!witnessed) {
            return BElement::from_laurent(tgt, std::move(l));
        }
        return BElement::with_witness(tgt, g.embed(src->ctx()).substitute_all(gens, tgt->ctx()), std::move(l));
    }

    BElement apply(const BElement &a) const { return apply(a.witness()); }

    // Laurent form of the image of a. When x goes to a unit monomial the map extends to the Laurent rings and
    // acts on z, w1..wn directly; otherwise the generator witness is evaluated.
    LaurentForm apply_laurent(const BElement &a) const
    {
        const LaurentForm &xi = images[kX].laurent();
        if (!xi.is_unit_monomial()) {
            return apply(a).laurent();
        }
        std::vector<std::optional<LaurentForm>> img(src->ctx()->size());
        img[kZ] = images[kZ].laurent();
        for (std::size_t i = 4; i < images.size(); ++i) {
            img[i] = images[i].laurent();
        }
        return substitute_laurent(a.laurent(), xi, img, tgt->ctx(), kX);
    }
};

inline RHomomorphism build_hom(const AlgebraPtr &src, const AlgebraPtr &tgt, std::vector<BElement> images)
{
    if (images.size() != 4 + src->adjoined()) {
        throw context_mismatch("homomorphism needs one image per source generator");
    }
    if (src->presentation().base_vars != tgt->presentation().base_vars) {
        throw context_mismatch("source and target have different base rings");
    }
    for (const auto &im : images) {
        if (im.algebra().get() != tgt.get()) {
            throw context_mismatch("image is not an element of the target algebra");
        }
    }
    return {src, tgt, std::move(images), false};
}

inline RHomomorphism build_hom(const AlgebraPtr &src, const AlgebraPtr &tgt, const std::vector<std::string> &images)
{
    std::vector<BElement> els;
    for (const auto &s : images) {
        els.push_back(BElement::from_gen(tgt, s));
    }
    return build_hom(src, tgt, std::move(els));
}

inline Report hom_report(const RHomomorphism &h)
{
    Report rep;
    const auto img = h.laurent_images();
    for (const auto &[name, rel] : {std::pair<std::string, Polynomial>{"X^d*Y - P", h.src->relation_y()},
                                    std::pair<std::string, Polynomial>{"X^e*T - Q", h.src->relation_t()}}) {
        const auto l = evaluate_polynomial(rel, img, h.tgt->ctx(), kX);
        rep.add("image of " + name + " vanishes", l.is_zero(), l.is_zero() ? "" : "Laurent form " + l.to_string());
    }
    return rep;
}

inline bool verify_hom(RHomomorphism &h)
{
    h.verified = hom_report(h).passed();
    return h.verified;
}

inline RHomomorphism compose(const RHomomorphism &first, const RHomomorphism &second)
{
    if (first.tgt.get() != second.src.get()) {
        throw context_mismatch("homomorphisms are not composable");
    }
    std::vector<BElement> images;
    for (const auto &im : first.images) {
        images.push_back(second.apply(im));
    }
    return {first.src, second.tgt, std::move(images), false};
}

// Checks that h and hinv are mutually inverse homomorphisms on generators. Composites for the generator indices in
// skip_src (of h.src) and skip_tgt (of h.tgt) are left to the caller, who must establish them separately.
inline Report iso_pair_report(RHomomorphism &h, RHomomorphism &hinv, const std::vector<std::size_t> &skip_src = {},
                              const std::vector<std::size_t> &skip_tgt = {})
{
    Report rep;
    rep.append(hom_report(h), "forward: ");
    rep.append(hom_report(hinv), "inverse: ");
    h.verified = hom_report(h).passed();
    hinv.verified = hom_report(hinv).passed();
    if (h.src.get() != hinv.tgt.get() || h.tgt.get() != hinv.src.get()) {
        rep.add("maps run in opposite directions", false);
        return rep;
    }
    auto skipped = [](const std::vector<std::size_t> &v, std::size_t i) {
        return std::find(v.begin(), v.end(), i) != v.end();
    };
    const auto sn = generator_names(*h.src);
    for (std::size_t i = 0; i < h.images.size(); ++i) {
        if (skipped(skip_src, i)) {
            continue;
        }
        const bool ok = hinv.apply_laurent(h.images[i]) == BElement::generator(h.src, i).laurent();
        rep.add("inverse(forward(" + sn[i] + ")) = " + sn[i], ok);
    }
    const auto tn = generator_names(*h.tgt);
    for (std::size_t i = 0; i < hinv.images.size(); ++i) {
        if (skipped(skip_tgt, i)) {
            continue;
        }
        const bool ok = h.apply_laurent(hinv.images[i]) == BElement::generator(h.tgt, i).laurent();
        rep.add("forward(inverse(" + tn[i] + "')) = " + tn[i] + "'", ok);
    }
    return rep;
}

inline bool verify_iso_pair(RHomomorphism &h, RHomomorphism &hinv) { return iso_pair_report(h, hinv).passed(); }

// Units are nonzero rationals; the polynomials live in the source presentation context.
struct IsoData {
    Rational lambda = 1, mu = 1, beta = 1, g2 = 1;
    Polynomial delta; // in X
    Polynomial alpha; // in X, Z
    Polynomial g1;    // in X, Y, Z

    static IsoData identity(const DDPresentation &p)
    {
        return {1, 1, 1, 1, Polynomial(p.ctx()), Polynomial(p.ctx()), Polynomial(p.ctx())};
    }
};

struct TransportResult {
    DDPresentation target;
    RHomomorphism forward; // source -> target
    RHomomorphism inverse; // target -> source
    Report checks;
};

// Builds P2, Q2 with P2(l*X, m*Z + delta(X)) = l^d*b*P1 + X^d*l^d*alpha and
// Q2(l*X, b*Y + alpha, m*Z + delta(X)) = X^e*g1 + g2*Q1, and the inverse pair between the two algebras.
inline TransportResult transport_presentation(const DDPresentation &src, const IsoData &data)
{
    require_valid(src);
    if (src.r() <= 1) {
        throw invalid_presentation("transport needs r > 1");
    }
    if (data.lambda == 0 || data.mu == 0 || data.beta == 0 || data.g2 == 0) {
        throw invalid_presentation("isomorphism data needs nonzero units lambda, mu, beta, g2");
    }
    const auto &ctx = src.ctx();
    const Polynomial delta = data.delta.embed(ctx), alpha = data.alpha.embed(ctx), g1 = data.g1.embed(ctx);
    if (delta.involves(kY) || delta.involves(kZ) || delta.involves(kT)) {
        throw invalid_presentation("delta must be a polynomial in X");
    }
    if (alpha.involves(kY) || alpha.involves(kT)) {
        throw invalid_presentation("alpha must be a polynomial in X, Z");
    }
    if (g1.involves(kT)) {
        throw invalid_presentation("g1 must be a polynomial in X, Y, Z");
    }
    const Polynomial X = src.x(), Y = src.y(), Z = src.z();
    const Rational il = Rational(1) / data.lambda, im = Rational(1) / data.mu, ib = Rational(1) / data.beta;

    // X = X'/l, Z = (Z' - delta(X'/l))/m, Y = (Y' - alpha(X, Z))/b in the source variables.
    std::vector<std::optional<Polynomial>> sub(ctx->size());
    const Polynomial xs = X * il;
    const Polynomial zs = (Z - delta.substitute(kX, xs)) * im;
    std::vector<std::optional<Polynomial>> xz(ctx->size());
    xz[kX] = xs;
    xz[kZ] = zs;
    const Polynomial ys = (Y - alpha.substitute_all(xz, ctx)) * ib;
    sub[kX] = xs;
    sub[kY] = ys;
    sub[kZ] = zs;

    const Polynomial lam_d = Polynomial::constant(ctx, rational_pow(data.lambda, src.d));
    const Polynomial P2 = (lam_d * data.beta * src.P + X.pow(src.d) * lam_d * alpha).substitute_all(sub, ctx);
    const Polynomial Q2 = (X.pow(src.e) * g1 + src.Q * data.g2).substitute_all(sub, ctx);

    TransportResult out{DDPresentation{src.base_vars, src.d, src.e, P2, Q2}, {}, {}, {}};
    const auto val = validate_presentation(out.target);
    if (!val.passed()) {
        throw invalid_presentation("transported presentation is invalid (g1 must have Y-degree below s)");
    }

    auto a1 = make_algebra(src, 0);
    auto a2 = make_algebra(out.target, 0);
    auto e1 = [&](const Polynomial &p) { return p.embed(a1->ctx()); };
    auto e2 = [&](const Polynomial &p) { return p.embed(a2->ctx()); };

    // Target -> source: X' -> l*x, Y' -> b*y + alpha, Z' -> m*z + delta, T' -> l^-e (g2*t + g1).
    std::vector<Polynomial> back{e1(X * data.lambda), e1(Y * data.beta + alpha), e1(Z * data.mu + delta),
                                 e1((src.t() * data.g2 + g1) * rational_pow(il, src.e))};
    // Source -> target: invert the triangular substitution.
    std::vector<std::optional<Polynomial>> fsub(ctx->size());
    fsub[kX] = xs;
    fsub[kZ] = zs;
    fsub[kY] = ys;
    const Polynomial tf = (src.t() * rational_pow(data.lambda, src.e) - g1.substitute_all(fsub, ctx)) * (Rational(1) / data.g2);
    std::vector<Polynomial> fwd{e2(xs), e2(ys), e2(zs), e2(tf)};

    std::vector<BElement> fimg, bimg;
    for (const auto &p : fwd) {
        fimg.push_back(BElement::from_gen(a2, p));
    }
    for (const auto &p : back) {
        bimg.push_back(BElement::from_gen(a1, p));
    }
    out.forward = build_hom(a1, a2, std::move(fimg));
    out.inverse = build_hom(a2, a1, std::move(bimg));
    out.checks = iso_pair_report(out.forward, out.inverse);
    out.checks.add("invariant tuple preserved", out.target.invariants() == src.invariants(),
                   src.invariants().to_string() + " -> " + out.target.invariants().to_string());
    return out;
}

enum class IsoVerdict { not_isomorphic, inconclusive };

struct NonIsoCertificate {
    DDPresentation first, second;
    InvariantTuple first_tuple, second_tuple;
    Report hypotheses;
    IsoVerdict verdict = IsoVerdict::inconclusive;

    std::string verdict_text() const
    {
        return verdict == IsoVerdict::not_isomorphic ? "not R-isomorphic (invariant tuples differ)" : "inconclusive";
    }
};

// Two algebras of the family with r > 1 and Q monic in Y are R-isomorphic only if their (d, e, r, s) agree.
inline NonIsoCertificate distinguish_by_invariants(const DDPresentation &p1, const DDPresentation &p2)
{
    NonIsoCertificate c{p1, p2, p1.invariants(), p2.invariants(), {}, IsoVerdict::inconclusive};
    const auto v1 = validate_presentation(p1), v2 = validate_presentation(p2);
    c.hypotheses.add("first presentation valid", v1.passed());
    c.hypotheses.add("second presentation valid", v2.passed());
    c.hypotheses.add("same base ring", p1.base_vars == p2.base_vars);
    c.hypotheses.add("r > 1 for first", p1.r() > 1, "r = " + std::to_string(p1.r()));
    c.hypotheses.add("r > 1 for second", p2.r() > 1, "r = " + std::to_string(p2.r()));
    const bool differ = c.first_tuple != c.second_tuple;
    c.hypotheses.add("invariant tuples differ", differ, c.first_tuple.to_string() + " vs " + c.second_tuple.to_string(), false);
    if (differ && c.hypotheses.passed()) {
        c.verdict = IsoVerdict::not_isomorphic;
    }
    return c;
}

} // namespace ddlab

#endif
