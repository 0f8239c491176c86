#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <ddlab/ddlab.hpp>

#include "generators.hpp"
#include "oracle.hpp"

using namespace ddlab;
using oracle::OPoly;

namespace
{

DDPresentation dd1() { return DDPresentation::make({}, 1, 2, "Z^2 - 1", "Y^2 + Z"); }
DDPresentation dd3() { return DDPresentation::make({}, 2, 1, "Z^3 + X", "Y^2 + X*Z"); }

OPoly oracle_laurent(const AlgebraPtr &alg, const Polynomial &g)
{
    const auto &p = alg->presentation();
    return oracle::laurent_image(oracle::from_poly(g), oracle::from_poly(p.P.embed(alg->ctx())),
                                 oracle::from_poly(p.Q.embed(alg->ctx())), p.d, p.e);
}

Polynomial random_gen_expr(std::mt19937 &rng, const AlgebraPtr &alg)
{
    std::vector<std::size_t> vars{kX, kY, kZ, kT};
    for (std::size_t i = 0; i < alg->adjoined(); ++i) {
        vars.push_back(alg->w_index(i));
    }
    return gen::random_poly(rng, alg->ctx(), vars, 2, gen::uniform(rng, 1, 3));
}

} // namespace

// ---------------------------------------------------------------- elements

TEST(Elements, LaurentFormsOfGenerators)
{
    auto A = make_algebra(dd1());
    EXPECT_EQ(BElement::generator(A, kX).laurent().to_string(), "{1: 1}");
    EXPECT_EQ(BElement::generator(A, kY).laurent().to_string(), "{-1: Z^2 - 1}");
    EXPECT_EQ(BElement::generator(A, kT).laurent().to_string(), "{-4: Z^4 - 2*Z^2 + 1, -2: Z}");
    // x*y = z^2 - 1 in B.
    EXPECT_EQ(BElement::from_gen(A, "X*Y"), BElement::from_gen(A, "Z^2 - 1"));
    EXPECT_NE(BElement::from_gen(A, "Y"), BElement::from_gen(A, "Z"));
}

TEST(Elements, MembershipExamples)
{
    auto A = make_algebra(dd1());
    const auto t = BElement::generator(A, kT).laurent();
    auto m = membership_with_witness(A, t);
    ASSERT_TRUE(m.member);
    ASSERT_TRUE(m.witness.has_value());
    EXPECT_EQ(A->to_laurent(*m.witness), t);

    auto bad = membership_with_witness(A, parse_laurent("X^-1*(Z - 1)", A->ctx(), kX));
    EXPECT_FALSE(bad.member);
    EXPECT_FALSE(bad.remainder.is_zero());

    auto zero = membership_with_witness(A, LaurentForm(A->ctx(), kX));
    EXPECT_TRUE(zero.member);
}

TEST(Elements, DivideByXPowerExamples)
{
    auto A = make_algebra(dd1(), 1);
    // P(x, x^2*w + z)/x = x^3*w^2 + 2*x*z*w + y.
    const auto a = BElement::from_gen(A, "(X^2*W1 + Z)^2 - 1");
    const auto q = divide_by_x_power(a, 1);
    EXPECT_EQ(q, BElement::from_gen(A, "X^3*W1^2 + 2*X*Z*W1 + Y"));
    ASSERT_TRUE(q.has_witness());
    EXPECT_EQ(A->to_laurent(q.witness()), q.laurent());
    EXPECT_THROW(divide_by_x_power(BElement::from_gen(A, "Z"), 1), divisibility_error);
    EXPECT_EQ(divide_by_x_power(BElement::from_gen(A, "X^2*Z"), 2), BElement::generator(A, kZ));
}

TEST(ElementsProperty, LaurentImageIsAHomomorphismAndMatchesOracle)
{
    std::mt19937 rng(41);
    for (const auto &p : {dd1(), dd3()}) {
        auto A = make_algebra(p, 1);
        for (int it = 0; it < 300; ++it) {
            const auto a = random_gen_expr(rng, A), b = random_gen_expr(rng, A);
            const auto la = A->to_laurent(a), lb = A->to_laurent(b);
            ASSERT_EQ(A->to_laurent(a * b), la * lb);
            ASSERT_EQ(A->to_laurent(a + b), la + lb);
            ASSERT_EQ(oracle::from_laurent(la), oracle_laurent(A, a)) << a.to_string();
        }
    }
}

TEST(ElementsProperty, MembershipFindsAWitness)
{
    std::mt19937 rng(42);
    for (const auto &p : {dd1(), dd3()}) {
        auto A = make_algebra(p);
        for (int it = 0; it < 60; ++it) {
            const auto g = random_gen_expr(rng, A);
            const auto f = A->to_laurent(g);
            const auto m = membership_with_witness(A, f);
            ASSERT_TRUE(m.member) << g.to_string();
            ASSERT_EQ(A->to_laurent(*m.witness), f);
            // Adding z/x leaves B: x*(f + z/x) has x-free part z modulo (x) + I, and z is not in (x) + I.
            const auto off = f + LaurentForm::from_polynomial(A->var(kZ), kX).shift(-1);
            ASSERT_FALSE(membership_with_witness(A, off).member) << g.to_string();
        }
    }
}

// ---------------------------------------------------------------- derivations

TEST(Derivations, CanonicalLndNilpotency)
{
    auto A = make_algebra(dd1());
    const auto D = canonical_lnd(A);
    EXPECT_TRUE(derivation_report(D).passed());
    EXPECT_EQ(nilpotency_index(D, BElement::generator(A, kX)).index, 0);
    EXPECT_EQ(nilpotency_index(D, BElement::generator(A, kZ)).index, 1);
    EXPECT_EQ(nilpotency_index(D, BElement::generator(A, kY)).index, 2);
    EXPECT_EQ(nilpotency_index(D, BElement::generator(A, kT)).index, 4);
    EXPECT_EQ(nilpotency_index(D, BElement::constant(A, 0)).index, -1);
    EXPECT_EQ(D.apply(BElement::generator(A, kY)), BElement::from_gen(A, "2*X^2*Z"));
}

TEST(Derivations, BrokenDerivationIsRejected)
{
    auto A = make_algebra(dd1());
    const auto D = make_derivation(A, {"0", "2*X^2*Z", "X^3", "0"});
    const auto rep = derivation_report(D);
    EXPECT_TRUE(rep.find("D(X^d*Y - P) = 0")->passed);
    EXPECT_FALSE(rep.find("D(X^e*T - Q) = 0")->passed);
    EXPECT_THROW(make_derivation(A, {"0", "0"}), error);
}

TEST(Derivations, ExponentialMapAxioms)
{
    auto A = make_algebra(dd1(), 1);
    const auto delta = exp_map(canonical_lnd(A));
    EXPECT_TRUE(exp_axioms_report(delta).passed());

    // z -> z + x^3*U + U^2 breaks both the relations and the composition law.
    auto bad = delta;
    bad.coefficients[kZ].push_back(BElement::constant(A, 1));
    const auto rep = exp_axioms_report(bad);
    EXPECT_FALSE(rep.passed());
    EXPECT_FALSE(rep.find("delta_V delta_U(z) = delta_(U+V)(z)")->passed);

    const auto hand = make_exponential_map(A, {{"X"}, {"Y"}, {"Z", "1"}, {"T"}, {"W1"}});
    EXPECT_FALSE(exp_axioms_report(hand).find("delta(X^d*Y - P) = 0")->passed);
}

TEST(Derivations, DegreeFunction)
{
    auto A = make_algebra(dd1());
    const auto delta = exp_map(canonical_lnd(A));
    EXPECT_EQ(deg_delta(delta, BElement::generator(A, kX)), 0);
    EXPECT_EQ(deg_delta(delta, BElement::generator(A, kZ)), 1);
    EXPECT_EQ(deg_delta(delta, BElement::generator(A, kY)), 2);
    EXPECT_EQ(deg_delta(delta, BElement::generator(A, kT)), 4);
    EXPECT_EQ(deg_delta(delta, BElement::constant(A, 0)), std::nullopt);
    EXPECT_EQ(deg_delta(delta, BElement::from_gen(A, "Y*Z")), 3);
}

TEST(Derivations, MakarLimanovReport)
{
    const auto good = ml_report(dd1());
    EXPECT_TRUE(good.hypotheses.passed());
    EXPECT_TRUE(good.direct_facts.passed());
    ASSERT_TRUE(good.conclusion.has_value());
    EXPECT_NE(good.conclusion->find("R[x]"), std::string::npos);
    const auto invalid = ml_report(DDPresentation::make({}, 1, 1, "X", "Y + Z"));
    EXPECT_FALSE(invalid.conclusion.has_value());
}

TEST(DerivationsProperty, ExponentialOfYIsShiftedP)
{
    std::mt19937 rng(43);
    for (int d = 1; d <= 3; ++d) {
        for (int e = 1; e <= 3; ++e) {
            for (int it = 0; it < 3; ++it) {
                const auto p = gen::random_presentation(rng, d, e, 3, 2);
                auto A = make_algebra(p);
                const auto delta = exp_map(canonical_lnd(A), 32);
                ASSERT_TRUE(exp_axioms_report(delta).passed()) << to_string(p);
                // delta_U(y) = P(x, z + x^(d+e)*U)/x^d, computed in oracle arithmetic.
                const std::size_t n = A->ctx()->size();
                std::vector<std::optional<OPoly>> im(n);
                im[kZ] = OPoly::var(n, kZ) + OPoly::var(n, kX, d + e) * OPoly::var(n, A->u_index());
                const OPoly expected = oracle::substitute(oracle::from_poly(p.P.embed(A->ctx())), im).shift(kX, -d);
                ASSERT_EQ(oracle::from_laurent(delta.generator_image(kY, A->u_index()).laurent()), expected);
            }
        }
    }
}

// ---------------------------------------------------------------- isomorphisms

TEST(Isomorphisms, ShiftedPresentationPair)
{
    const auto src = DDPresentation::make({}, 1, 2, "Z^2 - 1 + X", "(Y - 1)^2 + Z");
    auto A1 = make_algebra(src), A2 = make_algebra(dd1());
    auto fwd = build_hom(A1, A2, std::vector<std::string>{"X", "Y + 1", "Z", "T"});
    auto inv = build_hom(A2, A1, std::vector<std::string>{"X", "Y - 1", "Z", "T"});
    EXPECT_TRUE(hom_report(fwd).passed());
    EXPECT_TRUE(hom_report(inv).passed());
    EXPECT_TRUE(iso_pair_report(fwd, inv).passed());

    auto wrong = build_hom(A1, A2, std::vector<std::string>{"X", "Y + 2", "Z", "T"});
    EXPECT_FALSE(hom_report(wrong).passed());
    auto not_inverse = build_hom(A2, A1, std::vector<std::string>{"X", "Y - 1", "Z", "T + X"});
    EXPECT_FALSE(iso_pair_report(fwd, not_inverse).passed());
}

TEST(Isomorphisms, TransportExamples)
{
    auto data = IsoData::identity(dd1());
    data.alpha = Polynomial::constant(dd1().ctx(), 1);
    auto r = transport_presentation(dd1(), data);
    EXPECT_EQ(r.target.P, parse_poly("Z^2 - 1 + X", r.target.ctx()));
    EXPECT_TRUE(r.checks.passed());

    data = IsoData::identity(dd1());
    data.lambda = 2;
    r = transport_presentation(dd1(), data);
    EXPECT_EQ(r.target.P, parse_poly("2*Z^2 - 2", r.target.ctx()));
    EXPECT_TRUE(r.checks.passed());

    data = IsoData::identity(dd1());
    data.mu = 0;
    EXPECT_THROW(transport_presentation(dd1(), data), invalid_presentation);
    EXPECT_THROW(transport_presentation(DDPresentation::make({}, 1, 2, "Z", "Y^2"), IsoData::identity(dd1())),
                 invalid_presentation);
}

TEST(IsomorphismsProperty, RandomTransportsAreVerifiedIsomorphisms)
{
    std::mt19937 rng(44);
    int done = 0;
    while (done < 50) {
        const auto src = gen::random_presentation(rng, gen::uniform(rng, 1, 2), gen::uniform(rng, 1, 2), 3, 2);
        if (src.r() < 2) {
            continue;
        }
        const auto &ctx = src.ctx();
        IsoData data = IsoData::identity(src);
        data.lambda = gen::coeff(rng, true);
        data.mu = gen::coeff(rng, true);
        data.beta = gen::coeff(rng, true);
        data.g2 = gen::coeff(rng, true);
        data.delta = gen::random_poly(rng, ctx, {kX}, 2, gen::uniform(rng, 0, 2));
        data.alpha = gen::random_poly(rng, ctx, {kX, kZ}, 2, gen::uniform(rng, 0, 2));
        data.g1 = gen::random_poly(rng, ctx, {kX, kZ}, 1, gen::uniform(rng, 0, 2));
        if (src.s() > 1) {
            data.g1 += Polynomial::variable(ctx, kY) * gen::coeff(rng);
        }
        auto r = transport_presentation(src, data);
        ASSERT_TRUE(r.checks.passed()) << to_string(src);
        ASSERT_EQ(r.target.invariants(), src.invariants());

        // P2(l*X, m*Z + delta) = l^d*b*P1 + X^d*l^d*alpha, checked by oracle substitution.
        const std::size_t n = ctx->size();
        std::vector<std::optional<OPoly>> im(n);
        im[kX] = data.lambda * OPoly::var(n, kX);
        im[kZ] = data.mu * OPoly::var(n, kZ) + oracle::from_poly(data.delta);
        mpq_class ld = 1;
        for (int i = 0; i < src.d; ++i) {
            ld *= data.lambda;
        }
        const OPoly lhs = oracle::substitute(oracle::from_poly(r.target.P), im);
        const OPoly rhs = (ld * data.beta) * oracle::from_poly(src.P) + ld * (OPoly::var(n, kX, src.d) * oracle::from_poly(data.alpha));
        ASSERT_EQ(lhs, rhs);

        ASSERT_EQ(distinguish_by_invariants(src, r.target).verdict, IsoVerdict::inconclusive);
        ++done;
    }
}

TEST(Isomorphisms, DistinguishByInvariants)
{
    const auto dd2 = DDPresentation::make({}, 1, 1, "Z^2 - 1", "Y^2 + Z");
    EXPECT_EQ(distinguish_by_invariants(dd1(), dd2).verdict, IsoVerdict::not_isomorphic);
    EXPECT_EQ(distinguish_by_invariants(dd1(), dd1()).verdict, IsoVerdict::inconclusive);
    // r = 1 on one side: the invariant is not available.
    EXPECT_EQ(distinguish_by_invariants(dd1(), DDPresentation::make({}, 1, 1, "Z", "Y^2 + Z")).verdict,
              IsoVerdict::inconclusive);
    std::mt19937 rng(45);
    for (int it = 0; it < 40; ++it) {
        const auto a = gen::random_presentation(rng, gen::uniform(rng, 1, 3), gen::uniform(rng, 1, 3));
        const auto b = gen::random_presentation(rng, gen::uniform(rng, 1, 3), gen::uniform(rng, 1, 3));
        const auto c = distinguish_by_invariants(a, b);
        const bool expect = a.r() > 1 && b.r() > 1 && a.invariants() != b.invariants();
        ASSERT_EQ(c.verdict == IsoVerdict::not_isomorphic, expect);
    }
}

// ---------------------------------------------------------------- cancellation

TEST(Cancellation, StandardExampleIsCertified)
{
    const auto cert = cancellation_certificate(dd1());
    ASSERT_TRUE(cert.certified) << cert.failed_step;
    EXPECT_EQ(cert.verdict(), "non-cancellation pair certified");
    ASSERT_TRUE(cert.smaller.has_value());
    EXPECT_EQ(cert.smaller->e, 1);
    EXPECT_EQ(cert.f->to_string(), "X^2*W1 + Z");
    EXPECT_EQ(cert.g->to_string(), "X^3*W1^2 + 2*X*Z*W1 + Y");
    EXPECT_EQ(cert.h->to_string(),
              "X^5*W1^4 + 4*X^3*Z*W1^3 + 2*X^2*Y*W1^2 + 4*X*Z^2*W1^2 + 4*Y*Z*W1 + X*T + X*W1");
    EXPECT_EQ(cert.slice->unit_inverse.to_string(), "-1/4*Y*Z^2");
    ASSERT_TRUE(cert.non_iso.has_value());
    EXPECT_EQ(cert.non_iso->verdict, IsoVerdict::not_isomorphic);
    EXPECT_TRUE(cert.iso.passed());
}

TEST(Cancellation, FailingHypotheses)
{
    const auto bad = cancellation_certificate(DDPresentation::make({}, 1, 2, "Z^2", "Y^2 + Z"));
    EXPECT_FALSE(bad.certified);
    EXPECT_EQ(bad.failed_step.rfind("omega3", 0), 0u) << bad.failed_step;
    const auto e1 = cancellation_certificate(DDPresentation::make({}, 1, 1, "Z^2 - 1", "Y^2 + Z"));
    EXPECT_FALSE(e1.certified);
    EXPECT_EQ(e1.failed_step.rfind("hypotheses", 0), 0u) << e1.failed_step;
}

TEST(CancellationProperty, SimpleFamilyCertifies)
{
    std::mt19937 rng(46);
    for (int it = 0; it < 6; ++it) {
        const int d = gen::uniform(rng, 1, 2), e = gen::uniform(rng, 2, 3), r = gen::uniform(rng, 2, 3);
        const Rational c = gen::coeff(rng, true);
        const auto ctx = presentation_context({});
        const auto P = Polynomial::variable(ctx, kZ).pow(static_cast<unsigned>(r)) + Polynomial::constant(ctx, c);
        const auto p = DDPresentation::make({}, d, e, P, parse_poly("Y^2 + Z", ctx));
        const auto cert = cancellation_certificate(p);
        ASSERT_TRUE(cert.certified) << to_string(p) << ": " << cert.failed_step;
    }
}

TEST(Cancellation, MutatedInverseFailsThePairCheck)
{
    auto cert = cancellation_certificate(dd1());
    ASSERT_TRUE(cert.certified);
    auto fwd = *cert.forward;
    auto inv = *cert.inverse;
    inv.images[kZ] = inv.images[kZ] + BElement::generator(inv.tgt, kX);
    EXPECT_FALSE(iso_pair_report(fwd, inv).passed());
}
