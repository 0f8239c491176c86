// Independent reference arithmetic for tests: sparse Laurent polynomials over Q stored as
// exponent-vector -> coefficient maps, with naive substitution and differentiation. Shares no code with
// the library beyond reading terms out of its objects.
#ifndef DDLAB_TESTS_ORACLE_HPP
#define DDLAB_TESTS_ORACLE_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include <ddlab/laurent.hpp>
#include <ddlab/polynomial.hpp>

namespace oracle
{

using Exp = std::vector<long>;

struct OPoly {
    std::size_t nvars = 0;
    std::map<Exp, mpq_class> terms;

    explicit OPoly(std::size_t n = 0) : nvars(n) {}

    static OPoly constant(std::size_t n, const mpq_class &c)
    {
        OPoly p(n);
        if (c != 0) {
            p.terms[Exp(n, 0)] = c;
        }
        return p;
    }

    static OPoly var(std::size_t n, std::size_t i, long k = 1)
    {
        OPoly p(n);
        Exp e(n, 0);
        e[i] = k;
        p.terms[e] = 1;
        return p;
    }

    void add(const Exp &e, const mpq_class &c)
    {
        auto &slot = terms[e];
        slot += c;
        if (slot == 0) {
            terms.erase(e);
        }
    }

    bool is_zero() const { return terms.empty(); }
    bool operator==(const OPoly &o) const { return terms == o.terms; }
    bool operator!=(const OPoly &o) const { return terms != o.terms; }

    friend OPoly operator+(const OPoly &a, const OPoly &b)
    {
        OPoly r = a;
        for (const auto &[e, c] : b.terms) {
            r.add(e, c);
        }
        return r;
    }

    friend OPoly operator-(const OPoly &a, const OPoly &b)
    {
        OPoly r = a;
        for (const auto &[e, c] : b.terms) {
            r.add(e, -c);
        }
        return r;
    }

    friend OPoly operator*(const OPoly &a, const OPoly &b)
    {
        OPoly r(a.nvars);
        for (const auto &[ea, ca] : a.terms) {
            for (const auto &[eb, cb] : b.terms) {
                Exp e(a.nvars);
                for (std::size_t i = 0; i < a.nvars; ++i) {
                    e[i] = ea[i] + eb[i];
                }
                r.add(e, ca * cb);
            }
        }
        return r;
    }

    friend OPoly operator*(const mpq_class &s, const OPoly &a) { return constant(a.nvars, s) * a; }

    OPoly pow(unsigned k) const
    {
        OPoly r = constant(nvars, 1);
        for (unsigned i = 0; i < k; ++i) {
            r = r * *this;
        }
        return r;
    }

    // Multiplies by var(i)^k; k may be negative.
    OPoly shift(std::size_t i, long k) const
    {
        OPoly r(nvars);
        for (const auto &[e, c] : terms) {
            Exp f = e;
            f[i] += k;
            r.terms[f] = c;
        }
        return r;
    }

    OPoly derivative(std::size_t i) const
    {
        OPoly r(nvars);
        for (const auto &[e, c] : terms) {
            if (e[i] != 0) {
                Exp f = e;
                f[i] -= 1;
                r.add(f, c * e[i]);
            }
        }
        return r;
    }

    long min_exponent(std::size_t i) const
    {
        long m = 0;
        for (const auto &[e, c] : terms) {
            m = std::min(m, e[i]);
        }
        return m;
    }

    long degree(std::size_t i) const
    {
        long m = -1;
        for (const auto &[e, c] : terms) {
            m = std::max(m, e[i]);
        }
        return m;
    }

    // Coefficient of var(i)^k, with var(i) removed.
    OPoly coefficient(std::size_t i, long k) const
    {
        OPoly r(nvars);
        for (const auto &[e, c] : terms) {
            if (e[i] == k) {
                Exp f = e;
                f[i] = 0;
                r.terms[f] = c;
            }
        }
        return r;
    }
};

// Term-by-term substitution; a substituted variable must carry nonnegative exponents.
inline OPoly substitute(const OPoly &p, const std::vector<std::optional<OPoly>> &images)
{
    OPoly r(p.nvars);
    for (const auto &[e, c] : p.terms) {
        OPoly t = OPoly::constant(p.nvars, c);
        Exp keep(p.nvars, 0);
        for (std::size_t i = 0; i < p.nvars; ++i) {
            if (images[i]) {
                if (e[i] < 0) {
                    throw std::runtime_error("oracle: negative exponent under substitution");
                }
                t = t * images[i]->pow(static_cast<unsigned>(e[i]));
            } else {
                keep[i] = e[i];
            }
        }
        OPoly m(p.nvars);
        m.terms[keep] = 1;
        r = r + t * m;
    }
    return r;
}

inline OPoly from_poly(const ddlab::Polynomial &p)
{
    OPoly r(p.ctx()->size());
    for (const auto &[e, c] : p.terms()) {
        r.add(Exp(e.begin(), e.end()), c);
    }
    return r;
}

inline OPoly from_laurent(const ddlab::LaurentForm &f, std::size_t x = 0)
{
    OPoly r(f.ctx()->size());
    for (const auto &[k, c] : f.terms()) {
        for (const auto &[e, q] : c.terms()) {
            Exp g(e.begin(), e.end());
            g[x] += k;
            r.add(g, q);
        }
    }
    return r;
}

// Laurent image of a generator expression in a context [X, Y, Z, T, ...]: y -> P/x^d, t -> Q(x, y, z)/x^e.
inline OPoly laurent_image(const OPoly &g, const OPoly &P, const OPoly &Q, long d, long e)
{
    const std::size_t n = g.nvars;
    const OPoly y = P.shift(0, -d);
    std::vector<std::optional<OPoly>> qi(n);
    qi[1] = y;
    const OPoly t = substitute(Q, qi).shift(0, -e);
    std::vector<std::optional<OPoly>> im(n);
    im[1] = y;
    im[3] = t;
    return substitute(g, im);
}

inline mpq_class random_rational(std::mt19937 &rng, int lo, int hi, bool nonzero = false)
{
    std::uniform_int_distribution<int> num(lo, hi), den(1, 3);
    mpq_class q;
    do {
        q = mpq_class(num(rng), den(rng));
        q.canonicalize();
    } while (nonzero && q == 0);
    return q;
}

} // namespace oracle

#endif
