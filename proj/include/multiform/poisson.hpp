// Hamiltonian forms, Hamiltonian vector fields, multi-time and single-time
// Poisson brackets, the decomposition theorem and conservation laws.
//
// A horizontal form F is Hamiltonian when  i_{xi_F} Omega = delta F  has a
// solution; for 1-forms xi_F is vertical, for 0-forms it is a sum of
// vertical ^ horizontal bivectors.  The linear solves run fraction-free over
// the algebra; genuinely rational solutions are returned flagged, never
// silently accepted.

#ifndef MULTIFORM_POISSON_HPP
#define MULTIFORM_POISSON_HPP

#include "multiform_core.hpp"
#include "render.hpp"

namespace multiform {

struct NotHamiltonian : std::runtime_error {
    explicit NotHamiltonian(const std::string& what) : std::runtime_error(what) {}
};

struct HamiltonianForm {
    Form form;                        // (0,0) or (0,1)
    MultiVector vectorfield;          // canonical representative, free kernel directions zeroed
    std::vector<MultiVector> kernel;  // solutions of i_xi Omega = 0 seen by the solve
    bool polynomial = true;           // false when only a rational solution exists
    Expr denominator;                 // common denominator when not polynomial
};

namespace detail {

struct VfUnknown {
    VarId var;
    int dir;  // 0 for a plain vertical generator, else the horizontal factor
};

// assemble and solve  i_xi Omega = rhs_form  with rhs a (1,0)-form per
// direction component; returns unknown layout + solution
struct VfSolve {
    std::vector<VfUnknown> unknowns;
    ExprLinearSystem::Solution sol;
};

inline MultiVector assemble(const Signature& sig, const std::vector<VfUnknown>& unknowns,
                            const std::vector<Expr>& coeffs) {
    MultiVector xi(sig);
    for (size_t u = 0; u < unknowns.size(); ++u) {
        if (coeffs[u].is_zero()) continue;
        if (unknowns[u].dir == 0)
            xi += MultiVector::vertical(sig, unknowns[u].var, coeffs[u]);
        else
            xi += MultiVector::bivector(sig, unknowns[u].var, unknowns[u].dir, coeffs[u]);
    }
    return xi;
}

// rows: for each direction j and each pairing variable y,
//   sum_x c_x [i_{d/dx} omega_j]_{delta y} = d(F_j)/dy
inline VfSolve solve_vector_field(const SymplecticMultiform& Om, const std::map<int, Expr>& rhs,
                                  bool bivector_mode) {
    const Signature& sig = Om.sig();
    VfSolve out{{}, {}};

    std::set<VarId> all_support;
    for (const auto& [j, w] : Om.components())
        for (VarId v : Om.delta_support(j)) all_support.insert(v);

    // necessary-form precheck: F_j may depend (at most) on the variables
    // paired by omega_j
    for (const auto& [j, fj] : rhs) {
        std::set<VarId> allowed =
            bivector_mode ? all_support : Om.delta_support(j);
        for (VarId y : fj.jet_support())
            if (!allowed.count(y) && !fj.partial(y).is_zero())
                throw NotHamiltonian("component dx^" + std::to_string(sig.label_number(j)) +
                                     " depends on " + sig.var_name(y) +
                                     ", which is not paired by the symplectic multiform");
    }

    if (bivector_mode) {
        for (const auto& [j, w] : Om.components())
            for (VarId x : Om.delta_support(j)) out.unknowns.push_back(VfUnknown{x, j});
    } else {
        for (VarId x : all_support) out.unknowns.push_back(VfUnknown{x, 0});
    }

    // row keys: (component j, pairing var y); bivector mode folds all
    // components into a single (1,0) equation, j = 0
    std::vector<std::pair<int, VarId>> rows;
    std::map<std::pair<int, VarId>, size_t> row_of;
    auto touch_row = [&](int j, VarId y) {
        auto [it, fresh] = row_of.emplace(std::make_pair(j, y), rows.size());
        if (fresh) rows.emplace_back(j, y);
        return it->second;
    };

    // matrix assembly
    std::map<std::pair<size_t, size_t>, Expr> entries;  // (row, col) -> coeff
    for (size_t u = 0; u < out.unknowns.size(); ++u) {
        const VfUnknown& unk = out.unknowns[u];
        for (const auto& [j, w] : Om.components()) {
            if (unk.dir != 0 && unk.dir != j) continue;
            Form contracted = interior_vertical(unk.var, w);
            int row_comp = bivector_mode ? 0 : j;
            for (const auto& [k, c] : contracted.terms()) {
                size_t r = touch_row(row_comp, k.delta[0]);
                auto [it, fresh] = entries.emplace(std::make_pair(r, u), c);
                if (!fresh) it->second += c;
            }
        }
    }
    // right-hand sides
    std::map<size_t, Expr> rhs_rows;
    for (const auto& [j, fj] : rhs) {
        int row_comp = bivector_mode ? 0 : j;
        for (VarId y : fj.jet_support()) {
            Expr p = fj.partial(y);
            if (p.is_zero()) continue;
            size_t r = touch_row(row_comp, y);
            auto [it, fresh] = rhs_rows.emplace(r, p);
            if (!fresh) it->second += p;
        }
    }

    ExprLinearSystem sys(sig, out.unknowns.size());
    for (size_t r = 0; r < rows.size(); ++r) {
        std::vector<Expr> rowv(out.unknowns.size(), Expr::zero(sig));
        for (size_t u = 0; u < out.unknowns.size(); ++u) {
            auto it = entries.find({r, u});
            if (it != entries.end()) rowv[u] = it->second;
        }
        auto itb = rhs_rows.find(r);
        sys.add_row(std::move(rowv), itb == rhs_rows.end() ? Expr::zero(sig) : itb->second);
    }
    out.sol = sys.solve();
    if (!out.sol.consistent)
        throw NotHamiltonian("inconsistent pairing relation: 0 = " +
                             render_text(out.sol.inconsistency));
    return out;
}

} // namespace detail

// Solve  i_xi Omega = delta F.  F must be a horizontal 0- or 1-form that
// does not depend explicitly on the independent variables.
inline HamiltonianForm hamiltonian_vector_field(const Form& F, const SymplecticMultiform& Om) {
    const Signature& sig = F.sig();
    auto [p, q] = F.bidegree();
    if (p != 0 || q > 1)
        throw std::invalid_argument("hamiltonian_vector_field: F must be a horizontal 0- or 1-form");

    std::map<int, Expr> rhs;
    if (q == 0) {
        Expr h = Expr::zero(sig);
        for (const auto& [k, c] : F.terms()) h += c;
        rhs[0] = std::move(h);
    } else {
        for (const auto& [k, c] : F.terms()) {
            auto [it, fresh] = rhs.emplace(k.dx[0], c);
            if (!fresh) it->second += c;
        }
    }
    detail::VfSolve vs = detail::solve_vector_field(Om, rhs, /*bivector_mode=*/q == 0);

    HamiltonianForm out{F, MultiVector(sig), {}, vs.sol.polynomial, vs.sol.denominator};
    out.vectorfield = detail::assemble(sig, vs.unknowns, vs.sol.particular);
    if (!vs.sol.polynomial) {
        // the particular numerators are scaled by the denominator; flag it
        out.polynomial = false;
    }
    for (const auto& kv : vs.sol.kernel) out.kernel.push_back(detail::assemble(sig, vs.unknowns, kv));
    return out;
}

struct HamiltonicityCheck {
    bool hamiltonian = false;
    std::string certificate;  // first inconsistent relation when not
    std::optional<HamiltonianForm> witness;
};

inline HamiltonicityCheck is_hamiltonian(const Form& F, const SymplecticMultiform& Om) {
    HamiltonicityCheck out;
    try {
        out.witness = hamiltonian_vector_field(F, Om);
        if (!out.witness->polynomial) {
            out.hamiltonian = false;
            out.certificate = "solution exists only with rational-function coefficients";
            return out;
        }
        out.hamiltonian = true;
    } catch (const NotHamiltonian& e) {
        out.hamiltonian = false;
        out.certificate = e.what();
    }
    return out;
}

// {| P, Q |} = (-1)^r  i_{xi_P} delta Q, with r the horizontal degree of P
inline Form multitime_bracket(const HamiltonianForm& P, const HamiltonianForm& Q) {
    if (!P.polynomial || !Q.polynomial)
        throw NotHamiltonian("bracket of a non-polynomial Hamiltonian vector field");
    int r = P.form.bidegree().second;
    Form b = interior(P.vectorfield, vertical_delta(Q.form));
    return (r % 2) ? -b : b;
}

struct NotHamiltonianAt : std::runtime_error {
    int direction;
    NotHamiltonianAt(int dir, const std::string& what)
        : std::runtime_error(what), direction(dir) {}
};

// {f,g}_i = - i_{xi^i_f} delta g  with  i_{xi^i_f} omega_i = delta f;
// degenerate omega_i are handled by working modulo the kernel
inline Expr single_time_bracket(const Expr& f, const Expr& g, int dir,
                                const SymplecticMultiform& Om) {
    const Signature& sig = f.sig();
    SymplecticMultiform single(sig);
    single.set(dir, Om.component(dir));
    std::map<int, Expr> rhs;
    rhs[dir] = f;
    detail::VfSolve vs = [&] {
        try {
            return detail::solve_vector_field(single, rhs, /*bivector_mode=*/false);
        } catch (const NotHamiltonian& e) {
            throw NotHamiltonianAt(dir, e.what());
        }
    }();
    if (!vs.sol.polynomial)
        throw NotHamiltonianAt(dir, "solution exists only with rational-function coefficients");
    MultiVector xi = detail::assemble(sig, vs.unknowns, vs.sol.particular);
    Form bracket = -interior(xi, delta_expr(g));
    Expr out = Expr::zero(sig);
    for (const auto& [k, c] : bracket.terms()) out += c;
    return out;
}

struct DecompositionReport {
    bool bracket_decomposes = false;  // {|P,Q|} = sum_i {P_i,Q_i}_i dx^i
    bool shared_vector_field = false; // xi_P solves each single-time system
    Form lhs;
    Form rhs;
};

inline DecompositionReport decomposition_check(const HamiltonianForm& P, const HamiltonianForm& Q,
                                               const SymplecticMultiform& Om) {
    const Signature& sig = P.form.sig();
    DecompositionReport rep{false, false, Form::zero(sig), Form::zero(sig)};
    rep.lhs = multitime_bracket(P, Q);

    auto component = [&](const Form& F, int i) {
        Expr e = Expr::zero(sig);
        for (const auto& [k, c] : F.terms())
            if (k.dx.size() == 1 && k.dx[0] == i) e += c;
        return e;
    };
    Form rhs(sig);
    for (int i = 1; i <= sig.n(); ++i) {
        Expr pi = component(P.form, i);
        Expr qi = component(Q.form, i);
        Expr b = single_time_bracket(pi, qi, i, Om);
        rhs += wedge(Form::scalar(b), Form::dx(sig, i));
    }
    rep.rhs = rhs;
    rep.bracket_decomposes = (rep.lhs == rhs);

    // the lemma inside the theorem: xi_P itself serves as xi^i_{P_i}
    rep.shared_vector_field = true;
    for (int i = 1; i <= sig.n(); ++i) {
        Form lhs_i = interior(P.vectorfield, Om.component(i));
        Form rhs_i = delta_expr(component(P.form, i));
        if (!(lhs_i == rhs_i)) rep.shared_vector_field = false;
    }
    return rep;
}

// dF = 0 on shell; when F is Hamiltonian, additionally asserts agreement
// with the  i_{xi_F} delta H = 0  route
inline bool conservation_check(const Form& F, const HamiltonianMultiform& H,
                               const SymplecticMultiform& Om, const RewriteSystem& rs) {
    bool closed = rs.is_zero_on_shell(horizontal_d(F));
    HamiltonicityCheck hc = is_hamiltonian(F, Om);
    if (hc.hamiltonian) {
        Form flow = interior(hc.witness->vectorfield, vertical_delta(H.as_form()));
        bool via_flow = rs.is_zero_on_shell(flow);
        if (via_flow != closed)
            throw std::logic_error("conservation_check: dF and i_{xi_F} delta H routes disagree");
    }
    return closed;
}

} // namespace multiform

#endif
