#ifndef DDLAB_PRESENTATION_HPP
#define DDLAB_PRESENTATION_HPP

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "groebner.hpp"
#include "laurent.hpp"
#include "parser.hpp"
#include "polynomial.hpp"
#include "report.hpp"

namespace ddlab
{

// Variable slots of a presentation context [X, Y, Z, T, base variables...].
inline constexpr std::size_t kX = 0;
inline constexpr std::size_t kY = 1;
inline constexpr std::size_t kZ = 2;
inline constexpr std::size_t kT = 3;

inline bool is_reserved_name(const std::string &name)
{
    if (name == "X" || name == "Y" || name == "Z" || name == "T" || name == "U" || name == "V") {
        return true;
    }
    if (name.size() >= 2 && name[0] == 'W'
        && std::all_of(name.begin() + 1, name.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        return true;
    }
    return false;
}

inline bool is_identifier(const std::string &name)
{
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) {
        return false;
    }
    return std::all_of(name.begin(), name.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

inline ContextPtr presentation_context(const std::vector<std::string> &base_vars)
{
    std::vector<std::string> names{"X", "Y", "Z", "T"};
    for (const auto &u : base_vars) {
        if (!is_identifier(u) || is_reserved_name(u)) {
            throw invalid_presentation("base variable name '" + u + "' is reserved or malformed");
        }
        names.push_back(u);
    }
    return make_context(std::move(names));
}

struct InvariantTuple {
    int d = 0, e = 0, r = 0, s = 0;

    bool operator==(const InvariantTuple &o) const { return d == o.d && e == o.e && r == o.r && s == o.s; }
    bool operator!=(const InvariantTuple &o) const { return !(*this == o); }
    std::string to_string() const
    {
        return "(" + std::to_string(d) + "," + std::to_string(e) + "," + std::to_string(r) + "," + std::to_string(s) + ")";
    }
};

// R[X,Y,Z,T]/(X^d*Y - P(X,Z), X^e*T - Q(X,Y,Z)) with R = Q[base_vars].
struct DDPresentation {
    std::vector<std::string> base_vars;
    int d = 1;
    int e = 1;
    Polynomial P;
    Polynomial Q;

    static DDPresentation make(std::vector<std::string> base_vars, int d, int e, const std::string &P,
                               const std::string &Q)
    {
        auto ctx = presentation_context(base_vars);
        return {std::move(base_vars), d, e, parse_poly(P, ctx), parse_poly(Q, ctx)};
    }

    static DDPresentation make(std::vector<std::string> base_vars, int d, int e, const Polynomial &P,
                               const Polynomial &Q)
    {
        auto ctx = presentation_context(base_vars);
        return {std::move(base_vars), d, e, P.embed(ctx), Q.embed(ctx)};
    }

    const ContextPtr &ctx() const { return P.ctx(); }

    Polynomial x() const { return Polynomial::variable(ctx(), kX); }
    Polynomial y() const { return Polynomial::variable(ctx(), kY); }
    Polynomial z() const { return Polynomial::variable(ctx(), kZ); }
    Polynomial t() const { return Polynomial::variable(ctx(), kT); }

    Polynomial relation_y() const { return x().pow(d) * y() - P; }
    Polynomial relation_t() const { return x().pow(e) * t() - Q; }

    Polynomial P0() const { return P.evaluate(kX, 0); }
    int r() const { return P0().degree_in(kZ); }
    int s() const { return Q.degree_in(kY); }
    Polynomial leading_y_coefficient() const { return Q.coefficient_in(kY, std::max(s(), 0)); }

    InvariantTuple invariants() const { return {d, e, r(), s()}; }
};

inline std::string to_string(const DDPresentation &p)
{
    std::string base = "Q";
    if (!p.base_vars.empty()) {
        base += "[";
        for (std::size_t i = 0; i < p.base_vars.size(); ++i) {
            base += (i ? "," : "") + p.base_vars[i];
        }
        base += "]";
    }
    return "B(d=" + std::to_string(p.d) + ", e=" + std::to_string(p.e) + ", P=" + p.P.to_string()
           + ", Q=" + p.Q.to_string() + ") over " + base;
}

inline Report validate_presentation(const DDPresentation &p)
{
    Report rep;
    rep.add("d >= 1", p.d >= 1, "d = " + std::to_string(p.d));
    rep.add("e >= 1", p.e >= 1, "e = " + std::to_string(p.e));
    const bool p_vars = !p.P.involves(kY) && !p.P.involves(kT);
    rep.add("P in R[X,Z]", p_vars, "P = " + p.P.to_string());
    const bool q_vars = !p.Q.involves(kT);
    rep.add("Q in R[X,Y,Z]", q_vars, "Q = " + p.Q.to_string());
    const int r = p.r();
    rep.add("r = deg_Z P(0,Z) >= 1", r >= 1, "r = " + std::to_string(r));
    const int s = p.s();
    rep.add("s = deg_Y Q >= 1", s >= 1, "s = " + std::to_string(s));
    if (s >= 1) {
        const Polynomial b = p.leading_y_coefficient();
        const bool in_r = !b.is_zero() && !b.involves(kX) && !b.involves(kZ);
        rep.add("leading Y-coefficient of Q in R\\{0}", in_r, "b_s = " + b.to_string());
    } else {
        rep.add("leading Y-coefficient of Q in R\\{0}", false, "Q has no positive Y-degree");
    }
    rep.add("r > 1", r > 1, "needed for invariant-based non-isomorphism", false);
    return rep;
}

inline void require_valid(const DDPresentation &p)
{
    auto rep = validate_presentation(p);
    if (!rep.passed()) {
        std::string msg = "invalid presentation";
        for (const auto &f : rep.failures()) {
            msg += "; " + f;
        }
        throw invalid_presentation(msg);
    }
}

inline InvariantTuple invariant_tuple(const DDPresentation &p)
{
    require_valid(p);
    return p.invariants();
}

enum class CondClass { r2_s2, r2_s1, r1_s2_e2, none };

inline std::string to_string(CondClass c)
{
    switch (c) {
    case CondClass::r2_s2:
        return "r>=2 and s>=2";
    case CondClass::r2_s1:
        return "r>=2 and s=1";
    case CondClass::r1_s2_e2:
        return "r=1 and s>=2 and e>=2";
    case CondClass::none:
        return "none";
    }
    return "none";
}

inline CondClass cond_class(const DDPresentation &p)
{
    const int r = p.r(), s = p.s();
    if (r >= 2 && s >= 2) {
        return CondClass::r2_s2;
    }
    if (r >= 2 && s == 1) {
        return CondClass::r2_s1;
    }
    if (r == 1 && s >= 2 && p.e >= 2) {
        return CondClass::r1_s2_e2;
    }
    return CondClass::none;
}

inline std::string ideal_to_string(const std::vector<Polynomial> &gens)
{
    std::string out = "(";
    for (std::size_t i = 0; i < gens.size(); ++i) {
        out += (i ? ", " : "") + gens[i].to_string();
    }
    return out + ")";
}

namespace detail
{

inline void unit_ideal_check(Report &rep, const std::string &name, const std::vector<Polynomial> &gens,
                             std::size_t budget)
{
    std::vector<Polynomial> nonzero;
    for (const auto &g : gens) {
        if (!g.is_zero()) {
            nonzero.push_back(g);
        }
    }
    if (nonzero.empty()) {
        rep.add(name, false, "all generators are zero");
        return;
    }
    GroebnerOptions opts;
    opts.budget = budget;
    auto gb = buchberger(nonzero, opts);
    if (gb.is_unit()) {
        rep.add(name, true, ideal_to_string(gens) + " is the unit ideal");
    } else {
        rep.add(name, false, ideal_to_string(gens) + " has reduced basis " + ideal_to_string(gb.basis) + ", not the unit ideal");
    }
}

} // namespace detail

// Membership in the family with r > 1, s > 1 and the two unit-ideal conditions on the fibre x = 0.
inline Report omega3_check(const DDPresentation &p, std::size_t budget = 100000)
{
    Report rep;
    const int r = p.r(), s = p.s();
    rep.add("deg_Z P(0,Z) > 1", r > 1, "r = " + std::to_string(r));
    rep.add("deg_Y Q > 1", s > 1, "s = " + std::to_string(s));
    const Polynomial b = p.leading_y_coefficient();
    rep.add("Q monic in Y over K", s >= 1 && !b.is_zero() && !b.involves(kX) && !b.involves(kZ), "b_s = " + b.to_string());
    const Polynomial P0 = p.P0();
    const Polynomial dP0 = p.P.derivative(kZ).evaluate(kX, 0);
    detail::unit_ideal_check(rep, "(P(0,Z), P'(0,Z)) = R[Z]", {P0, dP0}, budget);
    const Polynomial Q0 = p.Q.evaluate(kX, 0);
    const Polynomial dQ0 = p.Q.derivative(kY).evaluate(kX, 0);
    detail::unit_ideal_check(rep, "(P(0,Z), Q(0,Y,Z), Q'(0,Y,Z)) = R[Y,Z]", {P0, Q0, dQ0}, budget);
    return rep;
}

// Generators of (X, X^d*Y - P, X^e*T - Q) intersected with R[Z], i.e. the ideal of xB in R[z].
inline std::vector<Polynomial> fiber_ideal(const DDPresentation &p,
                                           MonomialOrder::Kind inner = MonomialOrder::Kind::grevlex,
                                           std::size_t budget = 100000)
{
    require_valid(p);
    std::vector<std::string> keep{"Z"};
    keep.insert(keep.end(), p.base_vars.begin(), p.base_vars.end());
    return elimination_ideal({p.x(), p.relation_y(), p.relation_t()}, keep, inner, budget);
}

// Laurent images of X, Y, Z, T and the base variables in R[Z][x, 1/x], over the presentation context.
inline std::vector<std::optional<LaurentForm>> laurent_images(const DDPresentation &p)
{
    const auto &ctx = p.ctx();
    std::vector<std::optional<LaurentForm>> img(ctx->size());
    img[kX] = LaurentForm::x_power(ctx, kX, 1);
    img[kZ] = LaurentForm::from_polynomial(p.z(), kX);
    for (std::size_t i = 4; i < ctx->size(); ++i) {
        img[i] = LaurentForm::from_polynomial(Polynomial::variable(ctx, i), kX);
    }
    img[kY] = LaurentForm::from_polynomial(p.P, kX).shift(-p.d);
    img[kT] = evaluate_polynomial(p.Q, img, ctx, kX).shift(-p.e);
    return img;
}

inline LaurentForm presentation_laurent(const DDPresentation &p, const Polynomial &g)
{
    return evaluate_polynomial(g.embed(p.ctx()), laurent_images(p), p.ctx(), kX);
}

// R[X,Z,T]/(X^n*T - F(X,Z)). Its context is [X, Z, T, base variables...].
struct DanielewskiPresentation {
    std::vector<std::string> base_vars;
    int n = 1;
    Polynomial F;

    const ContextPtr &ctx() const { return F.ctx(); }
    Polynomial relation() const
    {
        return Polynomial::variable(ctx(), 0).pow(n) * Polynomial::variable(ctx(), 2) - F;
    }
};

inline ContextPtr danielewski_context(const std::vector<std::string> &base_vars)
{
    std::vector<std::string> names{"X", "Z", "T"};
    names.insert(names.end(), base_vars.begin(), base_vars.end());
    return make_context(std::move(names));
}

// Result of eliminating Y when s = 1: the algebra maps in both directions as generator images.
struct DanielewskiReduction {
    DanielewskiPresentation target;
    std::vector<Polynomial> forward; // images of X, Y, Z, T in the Danielewski context
    std::vector<Polynomial> inverse; // images of X, Z, T in the presentation context
    Report checks;
};

// With Q = b*Y + c(X,Z), b a nonzero rational: y = x^e*t' - c/b and t' = t/b give
// X^(d+e)*T' = P + X^d*c/b.
inline DanielewskiReduction reduce_to_danielewski(const DDPresentation &p)
{
    require_valid(p);
    if (p.s() != 1) {
        throw invalid_presentation("Danielewski reduction needs deg_Y Q = 1, got " + std::to_string(p.s()));
    }
    const Polynomial b = p.Q.coefficient_in(kY, 1);
    if (!b.is_constant()) {
        throw unsupported("Danielewski reduction needs the Y-coefficient of Q to be a unit of R, got " + b.to_string());
    }
    const Rational binv = Rational(1) / b.constant_value();
    const Polynomial c = p.Q.coefficient_in(kY, 0);

    auto dctx = danielewski_context(p.base_vars);
    auto to_d = [&](const Polynomial &f) {
        std::vector<std::optional<Polynomial>> img(p.ctx()->size());
        img[kX] = Polynomial::variable(dctx, 0);
        img[kZ] = Polynomial::variable(dctx, 1);
        img[kY] = Polynomial::constant(dctx, 0);
        img[kT] = Polynomial::constant(dctx, 0);
        return f.substitute_all(img, dctx);
    };
    DanielewskiReduction out;
    out.target.base_vars = p.base_vars;
    out.target.n = p.d + p.e;
    out.target.F = to_d(p.P + p.x().pow(p.d) * c * binv);

    const Polynomial X = Polynomial::variable(dctx, 0), Z = Polynomial::variable(dctx, 1), T = Polynomial::variable(dctx, 2);
    out.forward = {X, X.pow(p.e) * T - to_d(c) * binv, Z, T * b.constant_value()};
    out.inverse = {p.x(), p.z(), p.t() * binv};

    // Both algebras embed in R[z][x, 1/x]; the maps are inverse isomorphisms iff they commute with the embeddings.
    const auto &pctx = p.ctx();
    const auto bimg = laurent_images(p);
    std::vector<std::optional<LaurentForm>> dimg(dctx->size());
    dimg[0] = bimg[kX];
    dimg[1] = bimg[kZ];
    dimg[2] = LaurentForm::from_polynomial(out.target.F.embed(pctx), kX).shift(-out.target.n);
    for (std::size_t i = 3; i < dctx->size(); ++i) {
        dimg[i] = bimg[i + 1];
    }
    auto lb = [&](const Polynomial &f) { return evaluate_polynomial(f, bimg, pctx, kX); };
    auto ld = [&](const Polynomial &f) { return evaluate_polynomial(f, dimg, pctx, kX); };
    const char *bnames[] = {"x", "y", "z", "t"};
    for (std::size_t i = 0; i < 4; ++i) {
        const bool ok = ld(out.forward[i]) == lb(Polynomial::variable(pctx, i));
        out.checks.add(std::string("forward image of ") + bnames[i] + " agrees in the Laurent ring", ok,
                       out.forward[i].to_string());
    }
    const char *dnames[] = {"x", "z", "t'"};
    for (std::size_t i = 0; i < 3; ++i) {
        const bool ok = lb(out.inverse[i]) == ld(Polynomial::variable(dctx, i));
        out.checks.add(std::string("inverse image of ") + dnames[i] + " agrees in the Laurent ring", ok,
                       out.inverse[i].to_string());
    }
    out.checks.add("relation X^n*T - F vanishes", ld(out.target.relation()).is_zero());
    return out;
}

} // namespace ddlab

#endif
