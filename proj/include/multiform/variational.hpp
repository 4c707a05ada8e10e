// The variational engine: delta of a Lagrangian multiform, the integration-
// by-parts decomposition  delta L = E(L) - d Omega^(1), and the multiform
// Euler-Lagrange equations.
//
// The canonical peeling strategy mirrors the hand computation: terms in the
// components dx^1 ^ dx^j (those containing the space direction) are peeled to
// completion, preferring the space direction; every boundary step goes
// through the exact horizontal differential, so no signs are tracked by
// hand.  Components transverse to the space direction are left in place;
// their coefficients are Euler-Lagrange combinations and are read off as
// equations together with the fully reduced ones.

#ifndef MULTIFORM_VARIATIONAL_HPP
#define MULTIFORM_VARIATIONAL_HPP

#include "hierarchy.hpp"
#include "linsolve.hpp"
#include "rewrite.hpp"

namespace multiform {

struct NonDecomposable : std::runtime_error {
    explicit NonDecomposable(const std::string& what) : std::runtime_error(what) {}
};

struct SourceDecomposition {
    Form source;  // delta L + d omega1; undifferentiated delta factors in the
                  // space-bearing components, Euler-Lagrange residues elsewhere
    Form omega1;  // the accumulated boundary (1,1)-form

    // the defining identity, checked on construction
    bool verify(const Form& dL) const { return dL == source - horizontal_d(omega1); }
};

inline Form delta_of_multiform(const LagrangianMultiform& L) { return vertical_delta(L.as_form()); }

namespace detail {

// one peeling step: remove the term f * delta u^{(a)} ^ dx^{ab} by adding the
// exact differential of the matching boundary term
struct PeelStep {
    Form boundary;  // contribution to omega1
    Form exact;     // d(boundary), added to the working form
};

inline PeelStep peel(const Signature& sig, const FormKey& key, const Expr& f, int c) {
    int a = key.dx[0], b = key.dx[1];
    int m = (c == a) ? b : a;
    const VarInfo& vi = sig.info(key.delta[0]);
    Expr coeff = (c < m) ? f : -f;
    Form boundary = Form::term(sig, coeff, {sig.jet(vi.field, vi.index.minus(c))}, {m});
    return PeelStep{boundary, horizontal_d(boundary)};
}

// in-plane purity: in components containing the space direction all delta
// factors are undifferentiated
inline bool in_plane_pure(const Form& w, int space) {
    for (const auto& [k, c] : w.terms()) {
        if (std::find(k.dx.begin(), k.dx.end(), space) == k.dx.end()) continue;
        for (VarId v : k.delta)
            if (!w.sig().info(v).index.is_zero()) return false;
    }
    return true;
}

Form ansatz_omega1(const Form& dL, Form& source_out);

} // namespace detail

// Decompose delta L as source - d omega1.  If an explicit omega1 is declared
// by the hierarchy it selects the gauge representative; otherwise the
// canonical peeling strategy runs, with an undetermined-coefficient linear
// solve as fallback when peeling cycles.
inline SourceDecomposition source_decompose(const Form& dL,
                                            const std::map<int, Form>* declared = nullptr) {
    const Signature& sig = dL.sig();
    if (dL.is_zero())
        return SourceDecomposition{Form::zero(sig), Form::zero(sig)};
    if (auto [p, q] = dL.bidegree(); p != 1 || q != 2)
        throw std::invalid_argument("source_decompose: input must be a (1,2)-form");

    if (declared && !declared->empty()) {
        Form omega1(sig);
        for (const auto& [j, th] : *declared) omega1 += wedge(th, Form::dx(sig, j));
        Form source = dL + horizontal_d(omega1);
        return SourceDecomposition{std::move(source), std::move(omega1)};
    }

    const int space = 1;
    Form state = dL;
    Form omega1(sig);
    const int cap = 50;
    bool stalled = false;
    for (int sweep = 0;; ++sweep) {
        bool changed = false;
        // snapshot: peeling mutates the working form
        std::vector<std::pair<FormKey, Expr>> terms(state.terms().begin(), state.terms().end());
        for (const auto& [key, f] : terms) {
            if (std::find(key.dx.begin(), key.dx.end(), space) == key.dx.end()) continue;
            const MultiIndex& idx = sig.info(key.delta[0]).index;
            if (idx.is_zero()) continue;
            Expr cur = state.coefficient(key);
            if (cur.is_zero()) continue;  // consumed by an earlier spill
            int c = 0;
            if (idx.at(space) > 0)
                c = space;
            else {
                int other = key.dx[0] == space ? key.dx[1] : key.dx[0];
                if (idx.at(other) > 0) c = other;
            }
            if (c == 0) continue;  // transverse to its own plane: a stall
            detail::PeelStep step = detail::peel(sig, key, cur, c);
            omega1 += step.boundary;
            state += step.exact;
            changed = true;
        }
        if (!changed) break;
        if (sweep >= cap) {
            stalled = true;  // cycling
            break;
        }
    }
    if (!stalled && !detail::in_plane_pure(state, space)) stalled = true;
    if (stalled) {
        // the authoritative fallback: undetermined-coefficient linear solve
        Form source(sig);
        Form om = detail::ansatz_omega1(dL, source);
        return SourceDecomposition{std::move(source), std::move(om)};
    }
    return SourceDecomposition{std::move(state), std::move(omega1)};
}

inline SourceDecomposition source_decompose(const HierarchySpec& h) {
    Form dL = delta_of_multiform(*h.lagrangian);
    return source_decompose(dL, h.has_declared_omega1() ? &h.declared_omega1 : nullptr);
}

// The multiform Euler-Lagrange equations: every coefficient of the source,
// deduplicated, with redundant differential consequences removed (an
// equation is dropped when its normal form under the rules generated by the
// others vanishes).
inline std::vector<Expr> euler_lagrange(const Form& source) {
    const Signature& sig = source.sig();
    std::vector<Expr> raw;
    for (const auto& [k, c] : source.terms()) raw.push_back(c);

    // scale-normalize: make the leading coefficient one
    for (Expr& e : raw)
        if (!e.is_zero()) e = (Scalar::one() / e.leading_term().second) * e;
    // drop duplicates
    std::vector<Expr> uniq;
    for (const Expr& e : raw) {
        bool seen = false;
        for (const Expr& u : uniq)
            if (u == e || u == -e) {
                seen = true;
                break;
            }
        if (!seen && !e.is_zero()) uniq.push_back(e);
    }
    // simplest first: by maximal elimination key of their variables
    std::sort(uniq.begin(), uniq.end(), [&](const Expr& a, const Expr& b) {
        auto ka = std::make_tuple(0, 0, std::vector<uint8_t>{}, 0);
        auto kb = ka;
        for (VarId v : RewriteSystem::expr_vars(a)) ka = std::max(ka, elim_key(sig, v));
        for (VarId v : RewriteSystem::expr_vars(b)) kb = std::max(kb, elim_key(sig, v));
        if (ka != kb) return ka < kb;
        return a.size() < b.size();
    });

    std::vector<Expr> kept;
    for (const Expr& e : uniq) {
        RewriteSystem rs = orient(sig, kept);
        if (!rs.is_zero_on_shell(e)) kept.push_back(e);
    }
    // presentation: unit coefficient on the variable the equation solves for
    for (Expr& e : kept)
        if (auto lead = orientation_var(sig, e)) e = (Scalar::one() / lead->second) * e;
    return kept;
}

inline std::vector<Expr> euler_lagrange(const HierarchySpec& h) {
    return euler_lagrange(source_decompose(h).source);
}

namespace detail {

// Fallback: solve for omega1 by undetermined coefficients so that the
// in-plane components of dL + d(omega1) carry only undifferentiated delta
// factors.  Monomial bounds follow the content of dL.
inline Form ansatz_omega1(const Form& dL, Form& source_out) {
    const Signature& sig = dL.sig();
    const int space = 1;

    // candidate delta variables and monomials
    std::set<VarId> delta_vars;
    std::set<VarId> coeff_vars;
    int max_deg = 1;
    for (const auto& [k, c] : dL.terms()) {
        for (VarId v : k.delta) {
            delta_vars.insert(v);
            const VarInfo& vi = sig.info(v);
            for (int j = 1; j <= sig.n(); ++j)
                if (vi.index.at(j) > 0) delta_vars.insert(sig.jet(vi.field, vi.index.minus(j)));
        }
        for (VarId v : c.jet_support()) coeff_vars.insert(v);
        max_deg = std::max(max_deg, c.total_degree());
    }
    // close delta candidates downward in each direction
    for (bool grew = true; grew;) {
        grew = false;
        for (VarId v : std::set<VarId>(delta_vars)) {
            const VarInfo& vi = sig.info(v);
            for (int j = 1; j <= sig.n(); ++j)
                if (vi.index.at(j) > 0 && delta_vars.insert(sig.jet(vi.field, vi.index.minus(j))).second)
                    grew = true;
        }
    }
    std::vector<Monomial> monos =
        enumerate_monomials(sig, std::vector<VarId>(coeff_vars.begin(), coeff_vars.end()), max_deg);

    // unknowns: coefficient of each (monomial, delta var, direction)
    struct Unknown {
        Monomial m;
        VarId dv;
        int dir;
    };
    std::vector<Unknown> unknowns;
    for (int j = 1; j <= sig.n(); ++j)
        for (VarId dv : delta_vars)
            for (const Monomial& m : monos) unknowns.push_back(Unknown{m, dv, j});

    ScalarLinearSystem sys;
    // row index: (form key, monomial) pairs of in-plane impure terms
    std::map<std::string, size_t> row_ids;
    auto row_of = [&](const FormKey& k, const Monomial& m) {
        std::string s;
        for (VarId v : k.delta) s += std::to_string(v) + ",";
        s += "|";
        for (int d : k.dx) s += std::to_string(d) + ",";
        s += "|";
        for (auto& [v, e] : m) s += std::to_string(v) + "^" + std::to_string(e) + ",";
        auto [it, fresh] = row_ids.emplace(std::move(s), row_ids.size());
        return it->second;
    };
    auto impure = [&](const FormKey& k) {
        if (std::find(k.dx.begin(), k.dx.end(), space) == k.dx.end()) return false;
        return !sig.info(k.delta[0]).index.is_zero();
    };

    for (const auto& [k, c] : dL.terms())
        if (impure(k))
            for (const auto& [m, s] : c.terms()) sys.add_rhs(row_of(k, m), s);
    for (size_t u = 0; u < unknowns.size(); ++u) {
        Expr mono(&sig);
        mono.add_term(unknowns[u].m, Scalar::one());
        Form basis = Form::term(sig, mono, {unknowns[u].dv}, {unknowns[u].dir});
        for (const auto& [k, c] : horizontal_d(basis).terms())
            if (impure(k))
                for (const auto& [m, s] : c.terms()) sys.add(row_of(k, m), u, s);
    }

    std::vector<Scalar> sol;
    if (!sys.solve_affine(unknowns.size(), sol))
        throw NonDecomposable("peeling cycled and no polynomial Omega^(1) of matching bounds exists");

    Form omega1(sig);
    for (size_t u = 0; u < unknowns.size(); ++u) {
        if (sol[u].is_zero()) continue;
        Expr mono(&sig);
        mono.add_term(unknowns[u].m, sol[u]);
        omega1 += Form::term(sig, mono, {unknowns[u].dv}, {unknowns[u].dir});
    }
    source_out = dL + horizontal_d(omega1);
    return omega1;
}

} // namespace detail

} // namespace multiform

#endif
