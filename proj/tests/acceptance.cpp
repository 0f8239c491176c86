// Acceptance gate: one PASS/FAIL line per criterion. Limits are fixed below.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <ddlab/ddlab.hpp>

#include "generators.hpp"
#include "oracle.hpp"

using namespace ddlab;
using oracle::OPoly;

namespace
{

constexpr double kStandardCertSeconds = 10.0;
constexpr double kGridSeconds = 60.0;
constexpr int kGridSamples = 20;
constexpr int kNilpotencyCap = 32;
constexpr int kRandomIdeals = 200;
constexpr int kRandomElements = 200;
constexpr int kRandomFibers = 20;
constexpr int kRandomTransports = 50;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string &why)
    {
        if (pass) {
            detail = why;
        }
        pass = false;
    }
};

DDPresentation dd1() { return DDPresentation::make({}, 1, 2, "Z^2 - 1", "Y^2 + Z"); }
DDPresentation dd3() { return DDPresentation::make({}, 2, 1, "Z^3 + X", "Y^2 + X*Z"); }

// The (d, e) grid shared by the nilpotency and exponential-map criteria.
std::vector<DDPresentation> grid_presentations()
{
    std::mt19937 rng(2024);
    std::vector<DDPresentation> out;
    for (int d = 1; d <= 3; ++d) {
        for (int e = 1; e <= 3; ++e) {
            for (int k = 0; k < kGridSamples; ++k) {
                out.push_back(gen::random_presentation(rng, d, e, 4, 3));
            }
        }
    }
    return out;
}

Outcome standard_certificate()
{
    Outcome o;
    const auto t0 = Clock::now();
    const auto cert = cancellation_certificate(dd1());
    const double dt = seconds_since(t0);
    if (!cert.certified) {
        o.fail("not certified: " + cert.failed_step);
    } else if (cert.f->to_string() != "X^2*W1 + Z" || cert.g->to_string() != "X^3*W1^2 + 2*X*Z*W1 + Y" ||
               cert.h->to_string() != "X^5*W1^4 + 4*X^3*Z*W1^3 + 2*X^2*Y*W1^2 + 4*X*Z^2*W1^2 + 4*Y*Z*W1 + X*T + X*W1") {
        o.fail("f, g, h differ from the expected expressions");
    } else if (!cert.iso.passed() || !cert.non_iso || cert.non_iso->verdict != IsoVerdict::not_isomorphic) {
        o.fail("isomorphism or non-isomorphism step failed");
    }
    if (dt >= kStandardCertSeconds) {
        o.fail("took " + std::to_string(dt) + " s");
    }
    if (o.pass) {
        o.detail = std::to_string(dt) + " s";
    }
    return o;
}

Outcome lnd_grid()
{
    Outcome o;
    const auto t0 = Clock::now();
    int max_index = 0;
    for (const auto &p : grid_presentations()) {
        auto A = make_algebra(p);
        const auto D = canonical_lnd(A);
        if (!derivation_report(D).passed()) {
            o.fail("D not well defined on " + to_string(p));
            break;
        }
        for (std::size_t g = 0; g < 4; ++g) {
            const auto n = nilpotency_index(D, BElement::generator(A, g), kNilpotencyCap);
            if (n.cap_exceeded) {
                o.fail("index above " + std::to_string(kNilpotencyCap) + " on " + to_string(p));
                break;
            }
            max_index = std::max(max_index, n.index);
        }
    }
    const double dt = seconds_since(t0);
    if (dt >= kGridSeconds) {
        o.fail("took " + std::to_string(dt) + " s");
    }
    if (o.pass) {
        o.detail = std::to_string(9 * kGridSamples) + " presentations, max index " + std::to_string(max_index) + ", " +
                   std::to_string(dt) + " s";
    }
    return o;
}

Outcome nilpotency_of_z_and_y()
{
    Outcome o;
    int count = 0;
    for (const auto &p : grid_presentations()) {
        auto A = make_algebra(p);
        const auto D = canonical_lnd(A);
        const int iz = nilpotency_index(D, BElement::generator(A, kZ), kNilpotencyCap).index;
        const int iy = nilpotency_index(D, BElement::generator(A, kY), kNilpotencyCap).index;
        if (iz != 1 || iy != p.P.degree_in(kZ)) {
            o.fail(to_string(p) + ": z index " + std::to_string(iz) + ", y index " + std::to_string(iy));
            break;
        }
        ++count;
    }
    if (o.pass) {
        o.detail = std::to_string(count) + " presentations";
    }
    return o;
}

Outcome groebner_sanity()
{
    Outcome o;
    auto z = make_context({"Z"});
    const auto unit = buchberger({parse_poly("Z^2 - 1", z), parse_poly("2*Z", z)});
    const auto gcd = buchberger({parse_poly("Z^2", z), parse_poly("2*Z", z)});
    if (!unit.is_unit() || gcd.basis.size() != 1 || gcd.basis[0] != parse_poly("Z", z)) {
        o.fail("fixed examples");
        return o;
    }
    std::mt19937 rng(7);
    auto ctx = make_context({"X", "Y", "Z"});
    int checked = 0;
    for (int it = 0; it < kRandomIdeals && o.pass; ++it) {
        std::vector<Polynomial> gens;
        for (int g = 0; g < gen::uniform(rng, 1, 3); ++g) {
            gens.push_back(gen::random_poly(rng, ctx, {0, 1, 2}, 2, gen::uniform(rng, 1, 3)));
        }
        GroebnerOptions opts;
        opts.track = {true};
        GroebnerBasis gb;
        try {
            gb = buchberger(gens, opts);
        } catch (const budget_exceeded &) {
            continue;
        }
        if (!verify_groebner(gb)) {
            o.fail("Buchberger criterion fails on ideal " + std::to_string(it));
        }
        for (std::size_t j = 0; j < gb.basis.size() && o.pass; ++j) {
            OPoly sum(3);
            for (std::size_t i = 0; i < gens.size(); ++i) {
                sum = sum + oracle::from_poly(gb.cofactors[j][i]) * oracle::from_poly(gens[i]);
            }
            if (sum != oracle::from_poly(gb.basis[j])) {
                o.fail("cofactor identity fails on ideal " + std::to_string(it));
            }
        }
        for (const auto &g : gens) {
            if (o.pass && !normal_form_with_cofactors(g, gb).remainder.is_zero()) {
                o.fail("generator not reduced to zero on ideal " + std::to_string(it));
            }
        }
        ++checked;
    }
    if (o.pass && checked < kRandomIdeals * 9 / 10) {
        o.fail("only " + std::to_string(checked) + " ideals finished within budget");
    }
    if (o.pass) {
        o.detail = std::to_string(checked) + " random ideals";
    }
    return o;
}

Outcome laurent_and_membership()
{
    Outcome o;
    std::mt19937 rng(8);
    int count = 0;
    for (const auto &p : {dd1(), dd3()}) {
        auto A = make_algebra(p);
        const OPoly P = oracle::from_poly(p.P.embed(A->ctx())), Q = oracle::from_poly(p.Q.embed(A->ctx()));
        for (int it = 0; it < kRandomElements / 2 && o.pass; ++it) {
            const auto g = gen::random_poly(rng, A->ctx(), {kX, kY, kZ, kT}, 2, gen::uniform(rng, 1, 4));
            const auto f = A->to_laurent(g);
            if (oracle::from_laurent(f) != oracle::laurent_image(oracle::from_poly(g), P, Q, p.d, p.e)) {
                o.fail("Laurent form disagrees with oracle for " + g.to_string());
                break;
            }
            const auto m = membership_with_witness(A, f);
            if (!m.member || A->to_laurent(*m.witness) != f) {
                o.fail("membership witness missing for " + g.to_string());
            }
            ++count;
        }
        if (membership_with_witness(A, parse_laurent("X^-1*(Z - 1)", A->ctx(), kX)).member) {
            o.fail("(z - 1)/x accepted as a member of " + to_string(p));
        }
    }
    if (o.pass) {
        o.detail = std::to_string(count) + " elements and one non-member";
    }
    return o;
}

Outcome fiber_ideals()
{
    Outcome o;
    auto f1 = fiber_ideal(dd1()), f3 = fiber_ideal(dd3());
    if (f1.size() != 1 || f1[0].to_string() != "Z^2 - 1" || f3.size() != 1 || f3[0].to_string() != "Z^3") {
        o.fail("fixed examples: " + ideal_to_string(f1) + ", " + ideal_to_string(f3));
        return o;
    }
    std::mt19937 rng(9);
    for (int it = 0; it < kRandomFibers && o.pass; ++it) {
        const auto p = gen::random_presentation(rng, gen::uniform(rng, 1, 2), gen::uniform(rng, 1, 2), 3, 2);
        const auto fib = fiber_ideal(p);
        const auto P0 = p.P0();
        const auto lead = P0.coefficient_in(kZ, P0.degree_in(kZ)).constant_value();
        if (fib.size() != 1 || fib[0] != P0 * (Rational(1) / lead)) {
            o.fail(to_string(p) + ": got " + ideal_to_string(fib));
        }
    }
    if (o.pass) {
        o.detail = "2 fixed and " + std::to_string(kRandomFibers) + " random presentations";
    }
    return o;
}

Outcome transports()
{
    Outcome o;
    {
        const auto src = DDPresentation::make({}, 1, 2, "Z^2 - 1 + X", "(Y - 1)^2 + Z");
        auto A1 = make_algebra(src), A2 = make_algebra(dd1());
        auto fwd = build_hom(A1, A2, std::vector<std::string>{"X", "Y + 1", "Z", "T"});
        auto inv = build_hom(A2, A1, std::vector<std::string>{"X", "Y - 1", "Z", "T"});
        if (!hom_report(fwd).passed() || !hom_report(inv).passed() || !iso_pair_report(fwd, inv).passed()) {
            o.fail("shifted pair not verified");
            return o;
        }
    }
    std::mt19937 rng(10);
    int done = 0;
    while (done < kRandomTransports && o.pass) {
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
        const auto r = transport_presentation(src, data);
        if (!r.checks.passed()) {
            o.fail(to_string(src) + ": " + r.checks.failures().front());
        }
        ++done;
    }
    if (o.pass) {
        o.detail = "shifted pair and " + std::to_string(done) + " random transports";
    }
    return o;
}

Outcome exponential_of_y()
{
    Outcome o;
    int count = 0;
    for (const auto &p : grid_presentations()) {
        auto A = make_algebra(p);
        const auto delta = exp_map(canonical_lnd(A), kNilpotencyCap);
        const std::size_t n = A->ctx()->size(), U = A->u_index();
        std::vector<std::optional<OPoly>> im(n);
        im[kZ] = OPoly::var(n, kZ) + OPoly::var(n, kX, p.d + p.e) * OPoly::var(n, U);
        const OPoly Pe = oracle::from_poly(p.P.embed(A->ctx()));
        const OPoly expected = oracle::substitute(Pe, im).shift(kX, -p.d);
        const auto shift = A->P().taylor_shift(kZ, A->var(kX).pow(static_cast<unsigned>(p.d + p.e)) * A->var(U));
        const auto got = delta.generator_image(kY, U).laurent();
        if (oracle::from_laurent(got) != expected || LaurentForm::from_polynomial(shift, kX).shift(-p.d) != got) {
            o.fail(to_string(p));
            break;
        }
        if (!exp_axioms_report(delta).passed()) {
            o.fail("exponential map axioms fail on " + to_string(p));
            break;
        }
        ++count;
    }
    if (o.pass) {
        o.detail = std::to_string(count) + " presentations";
    }
    return o;
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"C1 standard example certified with f, g, h as expected, under 10 s", standard_certificate},
        {"C2 canonical derivation well defined and nilpotent (index <= 32) on the (d,e) grid, under 60 s", lnd_grid},
        {"C3 nilpotency index of z is 1 and of y is deg_Z P", nilpotency_of_z_and_y},
        {"C4 Groebner bases: fixed examples, cofactor identity and criterion on 200 random ideals", groebner_sanity},
        {"C5 Laurent forms match the oracle and membership finds witnesses", laurent_and_membership},
        {"C6 fiber ideal xB meet R[z] is generated by P(0,Z)", fiber_ideals},
        {"C7 isomorphism transport verified on 50 random data and the shifted pair", transports},
        {"C8 exponential map sends y to P(x, z + x^(d+e)U)/x^d", exponential_of_y},
    };
    int failures = 0;
    for (const auto &[name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception &ex) {
            o.fail(std::string("exception: ") + ex.what());
        }
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << o.detail << ")" << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
