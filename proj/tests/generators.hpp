// Hand-rolled random generators for property tests.
#ifndef DDLAB_TESTS_GENERATORS_HPP
#define DDLAB_TESTS_GENERATORS_HPP

#include <random>
#include <string>
#include <vector>

#include <ddlab/ddlab.hpp>

#include "oracle.hpp"

namespace gen
{

using ddlab::Polynomial;
using ddlab::Rational;

inline int uniform(std::mt19937 &rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Rational coeff(std::mt19937 &rng, bool nonzero = false) { return oracle::random_rational(rng, -3, 3, nonzero); }

// P in Q[X,Z] with deg_Z P = r exactly, constant leading Z-coefficient and deg_Z P(0,Z) = r.
inline Polynomial random_P(std::mt19937 &rng, const ddlab::ContextPtr &ctx, int r)
{
    Polynomial P = Polynomial::variable(ctx, ddlab::kZ).pow(r) * coeff(rng, true);
    for (int k = 0; k < r; ++k) {
        for (int i = 0; i <= 2; ++i) {
            if (uniform(rng, 0, 2) == 0) {
                P += Polynomial::variable(ctx, ddlab::kX).pow(i) * Polynomial::variable(ctx, ddlab::kZ).pow(k) * coeff(rng);
            }
        }
    }
    return P;
}

// Q in Q[X,Y,Z] with deg_Y Q = s and a nonzero rational Y^s coefficient.
inline Polynomial random_Q(std::mt19937 &rng, const ddlab::ContextPtr &ctx, int s, bool monic = false)
{
    const auto X = Polynomial::variable(ctx, ddlab::kX), Y = Polynomial::variable(ctx, ddlab::kY),
               Z = Polynomial::variable(ctx, ddlab::kZ);
    Polynomial Q = Y.pow(s) * (monic ? Rational(1) : coeff(rng, true));
    for (int k = 0; k < s; ++k) {
        for (int j = 0; j <= 2; ++j) {
            for (int i = 0; i <= 1; ++i) {
                if (uniform(rng, 0, 3) == 0) {
                    Q += X.pow(i) * Y.pow(k) * Z.pow(j) * coeff(rng);
                }
            }
        }
    }
    return Q;
}

inline ddlab::DDPresentation random_presentation(std::mt19937 &rng, int d, int e, int max_r = 4, int max_s = 3)
{
    const auto ctx = ddlab::presentation_context({});
    const int r = uniform(rng, 1, max_r), s = uniform(rng, 1, max_s);
    return ddlab::DDPresentation{{}, d, e, random_P(rng, ctx, r), random_Q(rng, ctx, s)};
}

// Random polynomial in the listed variables with degree at most max_deg in each.
inline Polynomial random_poly(std::mt19937 &rng, const ddlab::ContextPtr &ctx, const std::vector<std::size_t> &vars,
                              int max_deg, int terms)
{
    Polynomial p(ctx);
    for (int k = 0; k < terms; ++k) {
        ddlab::Exponents e(ctx->size(), 0);
        for (auto v : vars) {
            e[v] = uniform(rng, 0, max_deg);
        }
        p += Polynomial::monomial(ctx, e, coeff(rng, true));
    }
    return p;
}

} // namespace gen

#endif
