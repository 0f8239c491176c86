#ifndef DDLAB_RATIONAL_HPP
#define DDLAB_RATIONAL_HPP

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "errors.hpp"

namespace ddlab
{

// Arbitrary precision rational; gmpxx keeps values canonical (reduced, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(const Integer &num, const Integer &den)
{
    if (den == 0) {
        throw error("rational with zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational make_rational(long num, long den = 1) { return make_rational(Integer(num), Integer(den)); }

inline bool is_canonical(const Rational &q)
{
    if (q.get_den() < 1) {
        return false;
    }
    Integer g;
    mpz_gcd(g.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return g == 1;
}

// "a" or "a/b".
inline std::string to_string(const Rational &q)
{
    if (q.get_den() == 1) {
        return q.get_num().get_str();
    }
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational factorial(unsigned n)
{
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return Rational(r);
}

inline Rational binomial(unsigned n, unsigned k)
{
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return Rational(r);
}

inline Rational rational_pow(const Rational &q, long e)
{
    if (e < 0) {
        if (q == 0) {
            throw error("negative power of zero");
        }
        return rational_pow(Rational(1) / q, -e);
    }
    Integer n, d;
    mpz_pow_ui(n.get_mpz_t(), q.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), q.get_den_mpz_t(), static_cast<unsigned long>(e));
    return make_rational(n, d);
}

// Parses "a" or "a/b" with an optional leading sign.
inline Rational parse_rational(const std::string &text)
{
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(Integer(text, 10));
        }
        return make_rational(Integer(text.substr(0, slash), 10), Integer(text.substr(slash + 1), 10));
    } catch (const std::invalid_argument &) {
        throw error("invalid rational literal '" + text + "'");
    }
}

} // namespace ddlab

#endif
