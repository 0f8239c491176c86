#ifndef DDLAB_CANCELLATION_HPP
#define DDLAB_CANCELLATION_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "derivations.hpp"
#include "errors.hpp"
#include "isomorphisms.hpp"
#include "presentation.hpp"
#include "report.hpp"

namespace ddlab
{

// s = (e1(g, f) * h - w) / x with phi(s) = s + U, where e1(Y, Z) inverts dP/dZ(0,Z) * dQ/dY(0,Y,Z)
// modulo (P(0,Z), Q(0,Y,Z)). Modulo x, f = z, g = y and h = dQ/dY * dP/dZ * w, so e1(g, f) * h - w lies in xB[w].
struct Slice {
    BElement element;
    Polynomial unit_inverse; // e1, in the variables Y, Z of the algebra context
};

struct CancellationCertificate {
    DDPresentation presentation;
    std::optional<DDPresentation> smaller; // (d, e-1, P, Q)
    Report hypotheses;
    Report omega3;
    Report phi;
    Report elements;
    Report generators;
    Report iso;
    std::optional<BElement> f, g, h, s;
    std::optional<Slice> slice;
    std::optional<RHomomorphism> forward; // B_(d,e-1)[w'] -> B_(d,e)[w]
    std::optional<RHomomorphism> inverse; // B_(d,e)[w] -> B_(d,e-1)[w']
    std::optional<Polynomial> z_in_E, y_in_E; // expressions in x, y'=g, z'=f, t'=h, W1'=w
    std::optional<NonIsoCertificate> non_iso;
    std::vector<std::string> notes;
    std::string failed_step;
    bool certified = false;

    std::string verdict() const
    {
        return certified ? "non-cancellation pair certified" : "not certified (failed at: " + failed_step + ")";
    }
};

namespace detail
{

inline bool require_report(CancellationCertificate &cert, const Report &rep, const std::string &step)
{
    if (!rep.passed()) {
        cert.failed_step = step;
        for (const auto &f : rep.failures()) {
            cert.failed_step += "; " + f;
        }
        return false;
    }
    return true;
}

} // namespace detail

// phi = exp(D) for the canonical derivation on B[w] with D(w) = -x.
inline ExponentialMap build_phi_extension(const AlgebraPtr &A, int cap = 64) { return exp_map(canonical_lnd(A), cap); }

// f = x^(d+e-1) w + z.
inline BElement compute_slice_f(const AlgebraPtr &A)
{
    const int n = A->d() + A->e();
    return BElement::from_gen(A, A->var(kX).pow(n - 1) * A->var(A->w_index(0)) + A->var(kZ));
}

// g = P(x, f) / x^d and h = Q(x, g, f) / x^(e-1), with witnesses obtained by dividing the Taylor
// increments syntactically (every increment carries at least x^(d+e-1) resp. x^(e-1)).
inline std::pair<BElement, BElement> compute_g_h(const AlgebraPtr &A)
{
    const int d = A->d(), e = A->e(), n = d + e;
    const Polynomial X = A->var(kX), W = A->var(A->w_index(0));
    const Polynomial dz = X.pow(n - 1) * W;
    const Polynomial G = A->var(kY) + (A->P().taylor_shift(kZ, dz) - A->P()).divide_by_var_power(kX, d);
    const Polynomial dy = G - A->var(kY);
    std::vector<std::optional<Polynomial>> sub(A->ctx()->size());
    sub[kY] = A->var(kY) + dy;
    sub[kZ] = A->var(kZ) + dz;
    const Polynomial H = X * A->var(kT) + (A->Q().substitute_all(sub, A->ctx()) - A->Q()).divide_by_var_power(kX, e - 1);
    return {BElement::from_gen(A, G), BElement::from_gen(A, H)};
}

inline std::optional<Slice> find_slice(const AlgebraPtr &A, const BElement &f, const BElement &g, const BElement &h)
{
    const auto &ctx = A->ctx();
    const Polynomial P0 = A->P().evaluate(kX, 0);
    const Polynomial Q0 = A->Q().evaluate(kX, 0);
    const Polynomial J = A->P().derivative(kZ).evaluate(kX, 0) * A->Q().derivative(kY).evaluate(kX, 0);
    GroebnerOptions opts;
    opts.budget = A->budget();
    opts.track = {true, false, false};
    const auto gb = buchberger({J, P0, Q0}, opts);
    if (!gb.is_unit()) {
        return std::nullopt;
    }
    // The reduced basis is a nonzero constant c and c = cofactor * J + (combination of P0, Q0).
    const Polynomial e1 = gb.cofactors[0][0] * (Rational(1) / gb.basis[0].constant_value());
    std::vector<std::optional<Polynomial>> sub(ctx->size());
    sub[kY] = g.witness();
    sub[kZ] = f.witness();
    const BElement e0 = BElement::from_gen(A, e1.substitute_all(sub, ctx)) * h;
    const BElement s = divide_by_x_power(e0 - BElement::generator(A, A->w_index(0)), 1);
    return Slice{s, e1};
}

inline CancellationCertificate cancellation_certificate(const DDPresentation &p, int cap = 64)
{
    CancellationCertificate cert;
    cert.presentation = p;
    const auto val = validate_presentation(p);
    cert.hypotheses.append(val);
    cert.hypotheses.add("e > 1", p.e > 1, "e = " + std::to_string(p.e));
    if (!detail::require_report(cert, cert.hypotheses, "hypotheses")) {
        return cert;
    }
    cert.omega3 = omega3_check(p);
    if (!detail::require_report(cert, cert.omega3, "omega3")) {
        return cert;
    }

    const int d = p.d, e = p.e, n = d + e;
    auto A = make_algebra(p, 1);
    const auto &ctx = A->ctx();
    const std::size_t Wi = A->w_index(0), Ui = A->u_index();
    const Polynomial X = A->var(kX), Z = A->var(kZ), W = A->var(Wi), U = A->var(Ui);
    auto L = [&](const Polynomial &g) { return A->to_laurent(g); };

    // The exponential map.
    const auto phi = build_phi_extension(A, cap);
    cert.phi.append(exp_axioms_report(phi));
    auto img = [&](std::size_t g) { return phi.generator_image(g, Ui); };
    cert.phi.add("phi(x) = x", img(kX).laurent() == L(X));
    const Polynomial zU = Z + X.pow(n) * U;
    cert.phi.add("phi(z) = z + x^(d+e)*U", img(kZ).laurent() == L(zU), img(kZ).to_string());
    const LaurentForm phi_y = L(A->P().taylor_shift(kZ, X.pow(n) * U)).shift(-d);
    cert.phi.add("phi(y) = P(x, z + x^(d+e)*U)/x^d", img(kY).laurent() == phi_y, img(kY).to_string());
    auto qimg = A->laurent_images();
    qimg[kY] = img(kY).laurent();
    qimg[kZ] = img(kZ).laurent();
    const LaurentForm phi_t = evaluate_polynomial(A->Q(), qimg, ctx, kX).shift(-e);
    cert.phi.add("phi(t) = Q(x, phi(y), phi(z))/x^e", img(kT).laurent() == phi_t);
    cert.phi.add("phi(w) = w - x*U", img(Wi).laurent() == L(W - X * U), img(Wi).to_string());
    cert.phi.add("phi(y), phi(t) carry generator witnesses", img(kY).has_witness() && img(kT).has_witness());
    cert.notes.push_back("phi is normalized as phi(z) = z + x^(d+e)*U and phi(y) = P(x, phi(z))/x^d, "
                         "the assignment compatible with epsilon_0 phi = id");
    if (!detail::require_report(cert, cert.phi, "exponential map")) {
        return cert;
    }

    // Invariants f, g, h and the relations of E = R[x, f, g, h].
    cert.f = compute_slice_f(A);
    auto [g, h] = compute_g_h(A);
    cert.g = g;
    cert.h = h;
    const BElement x = BElement::generator(A, kX);
    const BElement &fe = *cert.f;
    for (const auto &[name, el] : {std::pair<std::string, BElement>{"f", fe}, {"g", g}, {"h", h}}) {
        const bool fixed = phi.apply(el, Ui) == el;
        cert.elements.add("phi(" + name + ") = " + name, fixed, el.to_string());
    }
    const LaurentForm Pf = evaluate_polynomial(A->P(), [&] {
        auto im = A->laurent_images();
        im[kZ] = fe.laurent();
        return im;
    }(), ctx, kX);
    cert.elements.add("x^d*g = P(x, f)", g.laurent().shift(d) == Pf);
    auto im_gf = A->laurent_images();
    im_gf[kY] = g.laurent();
    im_gf[kZ] = fe.laurent();
    const LaurentForm Qgf = evaluate_polynomial(A->Q(), im_gf, ctx, kX);
    cert.elements.add("x^(e-1)*h = Q(x, g, f)", h.laurent().shift(e - 1) == Qgf);
    if (!detail::require_report(cert, cert.elements, "invariant elements")) {
        return cert;
    }

    // E is a copy of B_(d,e-1): the map x, y', z', t', w' -> x, g, f, h, w respects the relations.
    cert.smaller = DDPresentation{p.base_vars, d, e - 1, p.P, p.Q};
    auto A2 = make_algebra(*cert.smaller, 1);
    const Polynomial X2 = A2->var(kX), Y2 = A2->var(kY), Z2 = A2->var(kZ), W2 = A2->var(A2->w_index(0));
    auto to_E = build_hom(A2, A, std::vector<BElement>{x, g, fe, h, BElement::generator(A, Wi)});
    const auto e_rep = hom_report(to_E);
    cert.generators.append(e_rep, "E relations: ");
    cert.notes.push_back("x, f, g, h generate a copy of B_(d,e-1): z -> z + x^(d+e-1)*w is a triangular automorphism of "
                         "R[x, 1/x, z, w], so the map of Laurent rings, and hence of the algebras, is injective");

    // z and y lie in E[w].
    cert.z_in_E = Z2 - X2.pow(n - 1) * W2;
    Polynomial yexpr = Y2;
    const Polynomial P2 = cert.smaller->P.embed(A2->ctx());
    bool bound_ok = true;
    for (int i = 1; i <= P2.degree_in(kZ); ++i) {
        const int xexp = (n - 1) * i - d;
        bound_ok = bound_ok && xexp >= e - 1;
        const Polynomial term = P2.derivative(kZ, static_cast<unsigned>(i)) * (Rational(i % 2 == 0 ? 1 : -1) / factorial(i));
        yexpr += term * X2.pow(xexp) * W2.pow(static_cast<unsigned>(i));
    }
    cert.y_in_E = yexpr;
    cert.generators.add("Taylor exponents (d+e-1)*i - d >= e-1 for i >= 1", bound_ok);
    cert.generators.add("z = f - x^(d+e-1)*w", to_E.apply(*cert.z_in_E) == BElement::generator(A, kZ),
                        cert.z_in_E->to_string());
    cert.generators.add("y = g + sum_i d^iP/dz^i(x, f) (-x^(d+e-1) w)^i / (i! x^d)",
                        to_E.apply(*cert.y_in_E) == BElement::generator(A, kY), cert.y_in_E->to_string());
    cert.notes.push_back("t is not asserted to lie in E[w]; the generator w' of the smaller side maps to a slice s of phi "
                         "with phi(s) = s + U instead of to w");
    if (!detail::require_report(cert, cert.generators, "generators")) {
        return cert;
    }

    // The slice and the explicit isomorphism pair.
    if (!p.base_vars.empty()) {
        cert.failed_step = "slice: membership over base rings with variables is unsupported";
        return cert;
    }
    try {
        cert.slice = find_slice(A, fe, g, h);
    } catch (const error &ex) {
        cert.failed_step = std::string("slice: ") + ex.what();
        return cert;
    }
    if (!cert.slice) {
        cert.failed_step = "slice: dP/dZ(0,Z) * dQ/dY(0,Y,Z) is not a unit modulo (P(0,Z), Q(0,Y,Z))";
        return cert;
    }
    cert.s = cert.slice->element;
    const BElement &s = *cert.s;
    cert.iso.add("phi(s) = s + U", phi.apply(s, Ui) == s + BElement::from_gen(A, U), s.to_string());

    // Forward B_(d,e-1)[w'] -> B_(d,e)[w]: x, y', z', t', w' -> x, g, f, h, s.
    auto forward = build_hom(A2, A, std::vector<BElement>{x, g, fe, h, s});
    // Inverse: w = e1(g, f) * h - x*s goes to e1(y', z') * t' - x*w', z = f - x^(d+e-1) * w, y through its
    // Taylor expression in E[w].
    const auto &ctx2 = A2->ctx();
    const std::size_t W2i = A2->w_index(0);
    const Polynomial e1 = cert.slice->unit_inverse.embed(ctx2);
    const Polynomial w_poly = e1 * A2->var(kT) - X2 * W2;
    std::vector<std::optional<Polynomial>> direct(4 + A->adjoined());
    direct[kX] = X2;
    direct[kY] = cert.y_in_E->substitute(W2i, w_poly);
    direct[kZ] = cert.z_in_E->substitute(W2i, w_poly);
    direct[Wi] = w_poly;
    std::vector<std::optional<LaurentForm>> sub(ctx->size());
    sub[kZ] = A2->to_laurent(*direct[kZ]);
    sub[Wi] = A2->to_laurent(w_poly);
    const LaurentForm x_img = LaurentForm::x_power(ctx2, kX, 1);
    std::vector<BElement> inv_images;
    bool members = true;
    const auto names = generator_names(*A);
    for (std::size_t gi = 0; gi < 4 + A->adjoined() && members; ++gi) {
        const LaurentForm target = substitute_laurent(L(A->var(gi)), x_img, sub, ctx2, kX);
        if (direct[gi]) {
            const bool ok = A2->to_laurent(*direct[gi]) == target;
            cert.iso.add("inverse image of " + names[gi] + " is " + direct[gi]->to_string(), ok);
            inv_images.push_back(BElement::from_gen(A2, *direct[gi]));
            members = members && ok;
            continue;
        }
        // t goes to Q(x, inverse(y), inverse(z)) / x^e.
        std::vector<std::optional<Polynomial>> yz(ctx2->size());
        yz[kY] = direct[kY];
        yz[kZ] = direct[kZ];
        const Polynomial qimg = p.Q.embed(ctx2).substitute_all(yz, ctx2);
        try {
            auto q = divide_by_x_power(BElement::from_gen(A2, qimg), p.e);
            const bool ok = q.laurent() == target;
            cert.iso.add("inverse image of " + names[gi] + " is Q(x, inverse(y), inverse(z))/x^e = " + q.witness().to_string(), ok);
            inv_images.push_back(q);
            members = members && ok;
        } catch (const divisibility_error &err) {
            cert.iso.add("inverse image of " + names[gi] + " lies in B_(d,e-1)[w']", false, err.what());
            members = false;
        }
    }
    if (!members) {
        detail::require_report(cert, cert.iso, "inverse map");
        return cert;
    }
    auto inverse = build_hom(A, A2, std::move(inv_images));
    // The composites at w' and t follow from the others since x is a non-zero-divisor:
    // x * inverse(s) = e1(y', z') * t' - inverse(w) = x * w' and x^e * forward(inverse(t)) = Q(x, y, z) = x^e * t.
    auto pair = iso_pair_report(forward, inverse, {W2i}, {kT});
    std::vector<std::optional<LaurentForm>> im_e1(ctx->size());
    im_e1[kY] = g.laurent();
    im_e1[kZ] = fe.laurent();
    const LaurentForm e1_gf = evaluate_polynomial(cert.slice->unit_inverse.embed(ctx), im_e1, ctx, kX);
    const bool s_rel = s.laurent().shift(1) == e1_gf * h.laurent() - BElement::generator(A, Wi).laurent();
    std::vector<std::optional<LaurentForm>> im_q(ctx2->size());
    im_q[kY] = inverse.images[kY].laurent();
    im_q[kZ] = inverse.images[kZ].laurent();
    const bool t_rel = inverse.images[kT].laurent().shift(p.e) == evaluate_polynomial(p.Q.embed(ctx2), im_q, ctx2, kX);
    const bool rest = pair.passed();
    pair.add("x*s = e1(g, f)*h - w", s_rel);
    pair.add("x^e * inverse(t) = Q(x, inverse(y), inverse(z))", t_rel);
    pair.add("inverse(forward(w1)) = w1", rest && s_rel, "from x*s = e1(g, f)*h - w");
    pair.add("forward(inverse(t')) = t'", rest && t_rel, "from x^e * inverse(t) = Q(x, inverse(y), inverse(z))");
    cert.iso.append(pair);
    cert.forward = forward;
    cert.inverse = inverse;
    if (!detail::require_report(cert, cert.iso, "isomorphism pair")) {
        return cert;
    }

    cert.non_iso = distinguish_by_invariants(p, *cert.smaller);
    if (cert.non_iso->verdict != IsoVerdict::not_isomorphic) {
        cert.failed_step = "non-isomorphism certificate inconclusive";
        return cert;
    }
    cert.notes.push_back("phi fixes x, f, g, h, so E is contained in the invariant ring of phi; equality with the "
                         "invariant ring is a known result and not computed");
    cert.certified = true;
    return cert;
}

} // namespace ddlab

#endif
