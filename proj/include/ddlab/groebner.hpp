#ifndef DDLAB_GROEBNER_HPP
#define DDLAB_GROEBNER_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "polynomial.hpp"
#include "rational.hpp"

namespace ddlab
{

// Monomial order over a fixed variable context. priority lists variable indices, most significant first.
struct MonomialOrder {
    enum class Kind { grevlex, lex, block };

    Kind kind = Kind::grevlex;
    std::vector<std::size_t> priority;
    // For block orders: the first block_size entries of priority form the block that is eliminated,
    // compared first; inner gives the order used within each block.
    std::size_t block_size = 0;
    Kind inner = Kind::grevlex;

    static MonomialOrder grevlex(std::size_t nvars)
    {
        MonomialOrder o;
        o.kind = Kind::grevlex;
        o.priority = identity(nvars);
        return o;
    }

    static MonomialOrder lex(std::size_t nvars)
    {
        MonomialOrder o;
        o.kind = Kind::lex;
        o.priority = identity(nvars);
        return o;
    }

    static MonomialOrder with_priority(Kind kind, std::vector<std::size_t> priority)
    {
        MonomialOrder o;
        o.kind = kind;
        o.priority = std::move(priority);
        return o;
    }

    // Elimination order: variables in `eliminate` are larger than every monomial in the others.
    static MonomialOrder block(std::size_t nvars, const std::vector<std::size_t> &eliminate, Kind inner = Kind::grevlex)
    {
        MonomialOrder o;
        o.kind = Kind::block;
        o.inner = inner;
        std::vector<bool> in_first(nvars, false);
        for (auto i : eliminate) {
            in_first.at(i) = true;
        }
        for (std::size_t i = 0; i < nvars; ++i) {
            if (in_first[i]) {
                o.priority.push_back(i);
            }
        }
        o.block_size = o.priority.size();
        for (std::size_t i = 0; i < nvars; ++i) {
            if (!in_first[i]) {
                o.priority.push_back(i);
            }
        }
        return o;
    }

    // Returns >0 if a > b, <0 if a < b, 0 if equal.
    int compare(const Exponents &a, const Exponents &b) const
    {
        switch (kind) {
        case Kind::grevlex:
            return compare_range(Kind::grevlex, a, b, 0, priority.size());
        case Kind::lex:
            return compare_range(Kind::lex, a, b, 0, priority.size());
        case Kind::block: {
            const int c = compare_range(inner, a, b, 0, block_size);
            return c != 0 ? c : compare_range(inner, a, b, block_size, priority.size());
        }
        }
        return 0;
    }

    std::string describe() const
    {
        switch (kind) {
        case Kind::grevlex:
            return "grevlex";
        case Kind::lex:
            return "lex";
        case Kind::block:
            return std::string("block(") + (inner == Kind::lex ? "lex" : "grevlex") + ")";
        }
        return "?";
    }

private:
    static std::vector<std::size_t> identity(std::size_t n)
    {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = i;
        }
        return p;
    }

    int compare_range(Kind k, const Exponents &a, const Exponents &b, std::size_t lo, std::size_t hi) const
    {
        if (k == Kind::lex) {
            for (std::size_t i = lo; i < hi; ++i) {
                const auto v = priority[i];
                if (a[v] != b[v]) {
                    return a[v] > b[v] ? 1 : -1;
                }
            }
            return 0;
        }
        std::int64_t da = 0, db = 0;
        for (std::size_t i = lo; i < hi; ++i) {
            da += a[priority[i]];
            db += b[priority[i]];
        }
        if (da != db) {
            return da > db ? 1 : -1;
        }
        for (std::size_t i = hi; i-- > lo;) {
            const auto v = priority[i];
            if (a[v] != b[v]) {
                return a[v] < b[v] ? 1 : -1;
            }
        }
        return 0;
    }
};

namespace detail
{

struct OrderGreater {
    const MonomialOrder *order;
    bool operator()(const Exponents &a, const Exponents &b) const { return order->compare(a, b) > 0; }
};

using Term = std::pair<Exponents, Rational>;
using TermList = std::vector<Term>; // sorted greatest first under some order

inline TermList sorted_terms(const Polynomial &p, const MonomialOrder &order)
{
    TermList t(p.terms().begin(), p.terms().end());
    std::sort(t.begin(), t.end(),
              [&](const Term &a, const Term &b) { return order.compare(a.first, b.first) > 0; });
    return t;
}

inline Polynomial to_polynomial(const ContextPtr &ctx, const TermList &t)
{
    Polynomial p(ctx);
    for (const auto &[e, c] : t) {
        p.add_term(e, c);
    }
    return p;
}

inline Exponents lcm(const Exponents &a, const Exponents &b)
{
    Exponents r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = std::max(a[i], b[i]);
    }
    return r;
}

inline Exponents sub_exponents(const Exponents &a, const Exponents &b)
{
    Exponents r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        r[i] = a[i] - b[i];
    }
    return r;
}

inline bool coprime(const Exponents &a, const Exponents &b)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != 0 && b[i] != 0) {
            return false;
        }
    }
    return true;
}

// Counts single division steps against a cap.
struct Budget {
    std::size_t limit;
    std::size_t used = 0;

    void step()
    {
        if (++used > limit) {
            throw budget_exceeded("Groebner reduction budget of " + std::to_string(limit) + " steps exceeded");
        }
    }
};

struct Reduction {
    TermList remainder;
    std::vector<Polynomial> quotients;
};

// Multivariate division of f by the divisors (full reduction: every term of the remainder is
// irreducible). Quotients are recorded when requested.
inline Reduction reduce(const ContextPtr &ctx, const TermList &f, const std::vector<TermList> &divisors,
                        const MonomialOrder &order, Budget &budget, bool want_quotients)
{
    Reduction out;
    if (want_quotients) {
        out.quotients.assign(divisors.size(), Polynomial(ctx));
    }
    std::map<Exponents, Rational, OrderGreater> work(OrderGreater{&order});
    for (const auto &[e, c] : f) {
        work.emplace(e, c);
    }
    while (!work.empty()) {
        auto it = work.begin();
        const Exponents lt = it->first;
        const Rational lc = it->second;
        std::size_t j = 0;
        for (; j < divisors.size(); ++j) {
            if (!divisors[j].empty() && divides(divisors[j].front().first, lt)) {
                break;
            }
        }
        if (j == divisors.size()) {
            out.remainder.emplace_back(lt, lc);
            work.erase(it);
            continue;
        }
        budget.step();
        const auto &g = divisors[j];
        const Exponents m = sub_exponents(lt, g.front().first);
        const Rational q = lc / g.front().second;
        work.erase(it);
        for (std::size_t t = 1; t < g.size(); ++t) {
            const Exponents e = add_exponents(g[t].first, m);
            const Rational delta = -q * g[t].second;
            auto [pos, inserted] = work.try_emplace(e, delta);
            if (!inserted) {
                pos->second += delta;
                if (pos->second == 0) {
                    work.erase(pos);
                }
            }
        }
        if (want_quotients) {
            out.quotients[j].add_term(m, q);
        }
    }
    return out;
}

} // namespace detail

struct GroebnerOptions {
    std::optional<MonomialOrder> order; // defaults to grevlex on the context
    std::size_t budget = 100000;
    bool post_check = true;
    // Inputs whose cofactor columns are tracked; empty means none, a single `true` entry is
    // broadcast to every input.
    std::vector<bool> track;
};

// Reduced Groebner basis with optional cofactors: basis[j] = sum_i cofactors[j][i] * inputs[i]
// restricted to the tracked inputs i (untracked columns are zero and the identity then only holds
// modulo the untracked generators).
struct GroebnerBasis {
    ContextPtr ctx;
    MonomialOrder order;
    std::vector<Polynomial> inputs;
    std::vector<Polynomial> basis;
    std::vector<bool> tracked;
    std::vector<std::vector<Polynomial>> cofactors;
    std::size_t reductions = 0;

    bool has_cofactors() const { return !cofactors.empty(); }
    bool is_unit() const { return basis.size() == 1 && basis.front().is_constant() && !basis.front().is_zero(); }
    bool is_zero_ideal() const { return basis.empty(); }
};

inline Exponents leading_exponents(const Polynomial &p, const MonomialOrder &order)
{
    if (p.is_zero()) {
        throw error("leading term of zero polynomial");
    }
    const Exponents *best = nullptr;
    for (const auto &[e, c] : p.terms()) {
        if (best == nullptr || order.compare(e, *best) > 0) {
            best = &e;
        }
    }
    return *best;
}

struct NormalForm {
    Polynomial remainder;
    std::vector<Polynomial> cofactors; // one per divisor
};

// Division of f by an arbitrary list (not necessarily a Groebner basis).
inline NormalForm reduce_by(const Polynomial &f, const std::vector<Polynomial> &divisors, const MonomialOrder &order,
                            std::size_t budget = 100000)
{
    std::vector<detail::TermList> divs;
    divs.reserve(divisors.size());
    for (const auto &d : divisors) {
        if (!same_context(d.ctx(), f.ctx())) {
            throw context_mismatch("divisor in a different context");
        }
        divs.push_back(detail::sorted_terms(d, order));
    }
    detail::Budget b{budget};
    auto red = detail::reduce(f.ctx(), detail::sorted_terms(f, order), divs, order, b, true);
    return {detail::to_polynomial(f.ctx(), red.remainder), std::move(red.quotients)};
}

// f = sum cofactors[j] * gb.basis[j] + remainder, no remainder term divisible by a leading term.
inline NormalForm normal_form_with_cofactors(const Polynomial &f, const GroebnerBasis &gb, std::size_t budget = 100000)
{
    if (!same_context(f.ctx(), gb.ctx)) {
        throw context_mismatch("normal form requested in a different context");
    }
    return reduce_by(f, gb.basis, gb.order, budget);
}

namespace detail
{

struct GBElement {
    TermList terms;
    std::vector<Polynomial> cof;
};

inline TermList s_polynomial(const TermList &f, const TermList &g, const Exponents &l, const ContextPtr &ctx,
                             const MonomialOrder &order, Polynomial *mf_out = nullptr, Polynomial *mg_out = nullptr)
{
    const Exponents mf = sub_exponents(l, f.front().first);
    const Exponents mg = sub_exponents(l, g.front().first);
    const Rational cf = Rational(1) / f.front().second;
    const Rational cg = Rational(1) / g.front().second;
    std::map<Exponents, Rational, OrderGreater> acc(OrderGreater{&order});
    auto add = [&](const Exponents &e, const Rational &c) {
        auto [it, ins] = acc.try_emplace(e, c);
        if (!ins) {
            it->second += c;
            if (it->second == 0) {
                acc.erase(it);
            }
        }
    };
    for (std::size_t i = 1; i < f.size(); ++i) {
        add(add_exponents(f[i].first, mf), f[i].second * cf);
    }
    for (std::size_t i = 1; i < g.size(); ++i) {
        add(add_exponents(g[i].first, mg), -g[i].second * cg);
    }
    if (mf_out != nullptr) {
        *mf_out = Polynomial::monomial(ctx, mf, cf);
    }
    if (mg_out != nullptr) {
        *mg_out = Polynomial::monomial(ctx, mg, cg);
    }
    return TermList(acc.begin(), acc.end());
}

} // namespace detail

// Checks that every S-polynomial of the basis reduces to zero.
inline bool verify_groebner(const GroebnerBasis &gb, std::size_t budget = 1000000)
{
    std::vector<detail::TermList> terms;
    for (const auto &p : gb.basis) {
        terms.push_back(detail::sorted_terms(p, gb.order));
    }
    detail::Budget b{budget};
    for (std::size_t i = 0; i < terms.size(); ++i) {
        for (std::size_t j = i + 1; j < terms.size(); ++j) {
            const auto l = detail::lcm(terms[i].front().first, terms[j].front().first);
            auto s = detail::s_polynomial(terms[i], terms[j], l, gb.ctx, gb.order);
            if (!detail::reduce(gb.ctx, s, terms, gb.order, b, false).remainder.empty()) {
                return false;
            }
        }
    }
    return true;
}

// Buchberger's algorithm with the product and chain criteria. Pairs are processed in order of
// lcm degree, then by index, so the output is deterministic for a given order.
inline GroebnerBasis buchberger(const std::vector<Polynomial> &gens, const GroebnerOptions &opts = {})
{
    if (gens.empty()) {
        throw error("buchberger needs at least one generator");
    }
    GroebnerBasis gb;
    gb.ctx = gens.front().ctx();
    for (const auto &g : gens) {
        if (!same_context(g.ctx(), gb.ctx)) {
            throw context_mismatch("generators live in different contexts");
        }
    }
    gb.order = opts.order ? *opts.order : MonomialOrder::grevlex(gb.ctx->size());
    gb.inputs = gens;
    gb.tracked.assign(gens.size(), false);
    if (opts.track.size() == 1 && opts.track.front()) {
        gb.tracked.assign(gens.size(), true);
    } else if (!opts.track.empty()) {
        if (opts.track.size() != gens.size()) {
            throw error("cofactor tracking mask has wrong length");
        }
        gb.tracked = opts.track;
    }
    const bool tracking = std::find(gb.tracked.begin(), gb.tracked.end(), true) != gb.tracked.end();
    const auto &order = gb.order;
    const auto &ctx = gb.ctx;
    detail::Budget budget{opts.budget};

    std::vector<detail::GBElement> G;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].is_zero()) {
            continue;
        }
        detail::GBElement el;
        el.terms = detail::sorted_terms(gens[i], order);
        if (tracking) {
            el.cof.assign(gens.size(), Polynomial(ctx));
            if (gb.tracked[i]) {
                el.cof[i] = Polynomial::constant(ctx, 1);
            }
        }
        G.push_back(std::move(el));
    }

    // Pending pairs keyed by (lcm degree, i, j).
    std::set<std::tuple<std::int64_t, std::size_t, std::size_t>> pending;
    auto pair_key = [&](std::size_t i, std::size_t j) {
        const auto l = detail::lcm(G[i].terms.front().first, G[j].terms.front().first);
        return std::make_tuple(detail::total_degree(l), std::min(i, j), std::max(i, j));
    };
    auto is_pending = [&](std::size_t i, std::size_t j) { return pending.count(pair_key(i, j)) != 0; };
    for (std::size_t j = 0; j < G.size(); ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            pending.insert(pair_key(i, j));
        }
    }

    std::vector<detail::TermList> divisors;
    for (const auto &el : G) {
        divisors.push_back(el.terms);
    }

    while (!pending.empty()) {
        const auto [deg, i, j] = *pending.begin();
        pending.erase(pending.begin());
        const auto &lti = G[i].terms.front().first;
        const auto &ltj = G[j].terms.front().first;
        if (detail::coprime(lti, ltj)) {
            continue;
        }
        const auto l = detail::lcm(lti, ltj);
        bool chain = false;
        for (std::size_t k = 0; k < G.size() && !chain; ++k) {
            if (k == i || k == j) {
                continue;
            }
            if (detail::divides(G[k].terms.front().first, l) && !is_pending(i, k) && !is_pending(j, k)) {
                chain = true;
            }
        }
        if (chain) {
            continue;
        }
        Polynomial mi, mj;
        auto s = detail::s_polynomial(G[i].terms, G[j].terms, l, ctx, order, &mi, &mj);
        if (s.empty()) {
            continue;
        }
        auto red = detail::reduce(ctx, s, divisors, order, budget, tracking);
        if (red.remainder.empty()) {
            continue;
        }
        detail::GBElement el;
        el.terms = std::move(red.remainder);
        const Rational inv = Rational(1) / el.terms.front().second;
        for (auto &[e, c] : el.terms) {
            c *= inv;
        }
        if (tracking) {
            el.cof.assign(gens.size(), Polynomial(ctx));
            for (std::size_t t = 0; t < gens.size(); ++t) {
                if (!gb.tracked[t]) {
                    continue;
                }
                Polynomial c = mi * G[i].cof[t] - mj * G[j].cof[t];
                for (std::size_t k = 0; k < G.size(); ++k) {
                    if (!red.quotients[k].is_zero() && !G[k].cof[t].is_zero()) {
                        c -= red.quotients[k] * G[k].cof[t];
                    }
                }
                el.cof[t] = c * inv;
            }
        }
        const std::size_t n = G.size();
        G.push_back(std::move(el));
        divisors.push_back(G.back().terms);
        for (std::size_t k = 0; k < n; ++k) {
            pending.insert(pair_key(k, n));
        }
    }

    // Minimalize: drop elements whose leading term is divisible by another's.
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < G.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < G.size() && !redundant; ++j) {
            if (i == j) {
                continue;
            }
            const auto &a = G[j].terms.front().first;
            const auto &b = G[i].terms.front().first;
            if (detail::divides(a, b) && (a != b || j < i)) {
                redundant = true;
            }
        }
        if (!redundant) {
            keep.push_back(i);
        }
    }

    // Interreduce tails; leading terms are untouched because they are minimal generators.
    std::vector<detail::GBElement> R;
    for (auto i : keep) {
        R.push_back(G[i]);
    }
    for (std::size_t i = 0; i < R.size(); ++i) {
        std::vector<detail::TermList> others;
        for (std::size_t j = 0; j < R.size(); ++j) {
            others.push_back(j == i ? detail::TermList{} : R[j].terms);
        }
        detail::TermList tail(R[i].terms.begin() + 1, R[i].terms.end());
        auto red = detail::reduce(ctx, tail, others, order, budget, tracking);
        detail::TermList terms{R[i].terms.front()};
        terms.insert(terms.end(), red.remainder.begin(), red.remainder.end());
        if (tracking) {
            for (std::size_t t = 0; t < gens.size(); ++t) {
                if (!gb.tracked[t]) {
                    continue;
                }
                for (std::size_t j = 0; j < R.size(); ++j) {
                    if (j != i && !red.quotients[j].is_zero() && !R[j].cof[t].is_zero()) {
                        R[i].cof[t] -= red.quotients[j] * R[j].cof[t];
                    }
                }
            }
        }
        R[i].terms = std::move(terms);
    }

    std::sort(R.begin(), R.end(), [&](const detail::GBElement &a, const detail::GBElement &b) {
        return order.compare(a.terms.front().first, b.terms.front().first) < 0;
    });
    // Normalize to leading coefficient 1.
    for (auto &el : R) {
        const Rational inv = Rational(1) / el.terms.front().second;
        if (inv != 1) {
            for (auto &t : el.terms) {
                t.second *= inv;
            }
            for (auto &c : el.cof) {
                c *= inv;
            }
        }
        gb.basis.push_back(detail::to_polynomial(ctx, el.terms));
        if (tracking) {
            gb.cofactors.push_back(std::move(el.cof));
        }
    }
    gb.reductions = budget.used;
    if (opts.post_check && !verify_groebner(gb)) {
        throw error("internal error: Groebner basis failed the S-polynomial check");
    }
    return gb;
}

// True iff 1 lies in the ideal (the reduced basis is {1}).
inline bool is_unit_ideal(const std::vector<Polynomial> &gens, std::size_t budget = 100000)
{
    std::vector<Polynomial> nonzero;
    for (const auto &g : gens) {
        if (!g.is_zero()) {
            if (g.is_constant()) {
                return true;
            }
            nonzero.push_back(g);
        }
    }
    if (nonzero.empty()) {
        return false;
    }
    GroebnerOptions opts;
    opts.budget = budget;
    return buchberger(nonzero, opts).is_unit();
}

// Groebner basis of the ideal intersected with the subring on `keep`, via a block order whose
// first block holds every other variable.
inline std::vector<Polynomial> elimination_ideal(const std::vector<Polynomial> &gens,
                                                 const std::vector<std::string> &keep,
                                                 MonomialOrder::Kind inner = MonomialOrder::Kind::grevlex,
                                                 std::size_t budget = 100000)
{
    if (gens.empty()) {
        throw error("elimination needs at least one generator");
    }
    const auto &ctx = gens.front().ctx();
    std::vector<bool> kept(ctx->size(), false);
    for (const auto &name : keep) {
        kept[ctx->require(name)] = true;
    }
    std::vector<std::size_t> eliminate;
    for (std::size_t i = 0; i < ctx->size(); ++i) {
        if (!kept[i]) {
            eliminate.push_back(i);
        }
    }
    std::vector<Polynomial> nonzero;
    for (const auto &g : gens) {
        if (!g.is_zero()) {
            nonzero.push_back(g);
        }
    }
    if (nonzero.empty()) {
        return {};
    }
    GroebnerOptions opts;
    opts.order = MonomialOrder::block(ctx->size(), eliminate, inner);
    opts.budget = budget;
    auto gb = buchberger(nonzero, opts);
    std::vector<Polynomial> out;
    for (const auto &p : gb.basis) {
        bool only_kept = true;
        for (auto i : eliminate) {
            if (p.involves(i)) {
                only_kept = false;
                break;
            }
        }
        if (only_kept) {
            out.push_back(p);
        }
    }
    return out;
}

} // namespace ddlab

#endif
