// The Hamiltonian multiform H = -L + sum_j dx^j ^ i_{~d_j} Omega^(1), the
// symplectic multiform Omega = delta Omega^(1), the multiform Hamilton
// equations, and the structural checks (closure relations, d H = -2 d L on
// shell, the gauge lemma).

#ifndef MULTIFORM_CORE_HPP
#define MULTIFORM_CORE_HPP

#include "random_gen.hpp"
#include "variational.hpp"

namespace multiform {

// coefficient formula H_ij = i_{~d_i} theta_j - i_{~d_j} theta_i - L_ij,
// where theta_j is the dx^j component of Omega^(1)
inline HamiltonianMultiform hamiltonian_multiform(const LagrangianMultiform& L, const Form& omega1) {
    const Signature& sig = L.sig();
    // split omega1 into theta_j (1,0)-components
    std::map<int, Form> theta;
    for (const auto& [k, c] : omega1.terms()) {
        if (k.dx.size() != 1 || k.delta.size() != 1)
            throw std::invalid_argument("hamiltonian_multiform: omega1 must be a (1,1)-form");
        int j = k.dx[0];
        auto it = theta.try_emplace(j, Form::zero(sig)).first;
        it->second.add(FormKey{k.delta, {}}, c);
    }
    auto theta_of = [&](int j) {
        auto it = theta.find(j);
        return it == theta.end() ? Form::zero(sig) : it->second;
    };
    auto scalar_of = [&](const Form& w) {
        Expr e = Expr::zero(sig);
        for (const auto& [k, c] : w.terms()) {
            if (!k.delta.empty() || !k.dx.empty())
                throw std::logic_error("expected a (0,0)-form");
            e += c;
        }
        return e;
    };

    HamiltonianMultiform H(sig);
    for (int i = 1; i <= sig.n(); ++i)
        for (int j = i + 1; j <= sig.n(); ++j) {
            Expr hij = scalar_of(interior(VerticalShift{i}, theta_of(j))) -
                       scalar_of(interior(VerticalShift{j}, theta_of(i))) - L.get(i, j);
            H.set(i, j, std::move(hij));
        }
    return H;
}

inline SymplecticMultiform symplectic_multiform(const Form& omega1) {
    const Signature& sig = omega1.sig();
    Form Om = vertical_delta(omega1);
    SymplecticMultiform out(sig);
    std::map<int, Form> comps;
    for (const auto& [k, c] : Om.terms()) {
        if (k.dx.size() != 1 || k.delta.size() != 2)
            throw std::logic_error("symplectic_multiform: delta omega1 is not a (2,1)-form");
        int j = k.dx[0];
        auto it = comps.try_emplace(j, Form::zero(sig)).first;
        it->second.add(FormKey{k.delta, {}}, c);
    }
    for (auto& [j, w] : comps) out.set(j, std::move(w));
    return out;
}

// coefficient equations of  delta H - sum_j dx^j ^ i_{~d_j} Omega = 0,
// deduplicated like the Euler-Lagrange set.  Pairwise this is
// delta H_ij = i_{~d_j} omega_i - i_{~d_i} omega_j.
inline std::vector<Expr> multiform_hamilton_equations(const HamiltonianMultiform& H,
                                                      const SymplecticMultiform& Om) {
    const Signature& sig = H.sig();
    Form residual = vertical_delta(H.as_form());
    for (int j = 1; j <= sig.n(); ++j) {
        Form contracted = interior(VerticalShift{j}, Om.as_form());
        residual -= wedge(Form::dx(sig, j), contracted);
    }
    return euler_lagrange(residual);
}

// two rewrite systems generate the same closure on all jet variables up to
// the given order when each one's rules normalize to zero under the other
inline bool equivalent_on_shell(const RewriteSystem& a, const RewriteSystem& b) {
    for (const auto& r : a.rules())
        if (!b.is_zero_on_shell(Expr::var(a.sig(), r.lhs) - r.rhs)) return false;
    for (const auto& r : b.rules())
        if (!a.is_zero_on_shell(Expr::var(b.sig(), r.lhs) - r.rhs)) return false;
    return true;
}

struct MultiformCheckReport {
    bool closure_L = false;        // d L = 0 on shell
    bool theorem_dH = false;       // d H = -2 d L on shell
    bool closure_H = false;        // d H = 0 on shell
    bool closure_Omega = false;    // d Omega = 0 on shell
    bool gauge_lemma = false;      // H(L + d w, Omega1 + delta w) = H(L, Omega1)
    bool hamilton_equivalent = false;  // Hamilton equations generate the E-L shell
    uint64_t seed = 0;
    std::vector<uint64_t> gauge_seeds;
    std::string failure;  // rendered identity that broke, empty when all pass

    bool all() const {
        return closure_L && theorem_dH && closure_H && closure_Omega && gauge_lemma &&
               hamilton_equivalent;
    }
};

struct DerivedObjects {
    SourceDecomposition decomposition;
    std::vector<Expr> el_equations;
    RewriteSystem rules;
    HamiltonianMultiform H;
    SymplecticMultiform Omega;

    DerivedObjects(const Signature& sig)
        : decomposition{Form::zero(sig), Form::zero(sig)}, rules(sig), H(sig), Omega(sig) {}
};

inline DerivedObjects derive_all(const HierarchySpec& h) {
    DerivedObjects out(h.sig());
    out.decomposition = source_decompose(h);
    out.el_equations = euler_lagrange(out.decomposition.source);
    out.rules = orient(h.sig(), out.el_equations);
    out.H = hamiltonian_multiform(*h.lagrangian, out.decomposition.omega1);
    out.Omega = symplectic_multiform(out.decomposition.omega1);
    return out;
}

inline MultiformCheckReport check_multiform(const HierarchySpec& h, uint64_t seed = 7,
                                            const Form* omega1_override = nullptr) {
    const Signature& sig = h.sig();
    const LagrangianMultiform& L = *h.lagrangian;
    MultiformCheckReport rep;
    rep.seed = seed;

    Form dL_delta = delta_of_multiform(L);
    SourceDecomposition dec = omega1_override
                                  ? SourceDecomposition{dL_delta + horizontal_d(*omega1_override),
                                                        *omega1_override}
                                  : source_decompose(dL_delta,
                                                     h.has_declared_omega1() ? &h.declared_omega1
                                                                             : nullptr);
    std::vector<Expr> eqs = euler_lagrange(dec.source);
    RewriteSystem rs = orient(sig, eqs);

    HamiltonianMultiform H = hamiltonian_multiform(L, dec.omega1);
    SymplecticMultiform Om = symplectic_multiform(dec.omega1);

    Form Lform = L.as_form();
    Form Hform = H.as_form();
    Form dl = horizontal_d(Lform);
    Form dh = horizontal_d(Hform);

    auto record = [&](bool ok, const char* what) {
        if (!ok && rep.failure.empty()) rep.failure = what;
        return ok;
    };
    rep.closure_L = record(rs.is_zero_on_shell(dl), "dL = 0 on shell");
    rep.theorem_dH = record(rs.is_zero_on_shell(dh + Scalar(2L) * dl), "dH = -2 dL on shell");
    rep.closure_H = record(rs.is_zero_on_shell(dh), "dH = 0 on shell");
    rep.closure_Omega =
        record(rs.is_zero_on_shell(horizontal_d(vertical_delta(dec.omega1))), "dOmega = 0 on shell");

    // gauge lemma, two seeded draws of w in A^(0,1)
    rep.gauge_lemma = true;
    for (int run = 0; run < 2; ++run) {
        uint64_t s = seed + static_cast<uint64_t>(run);
        rep.gauge_seeds.push_back(s);
        RandomGen gen(s);
        LagrangianMultiform Lt(sig);
        Form omega1_t = dec.omega1;
        // w = sum_j g_j dx^j; L_ij += d_i g_j - d_j g_i; omega1 += delta w
        std::vector<Expr> g;
        for (int j = 0; j <= sig.n(); ++j) g.push_back(gen.expr(sig, 2, 2, 2));
        for (int i = 1; i <= sig.n(); ++i)
            for (int j = i + 1; j <= sig.n(); ++j)
                Lt.set(i, j, L.get(i, j) + g[static_cast<size_t>(j)].total_derivative(i) -
                                 g[static_cast<size_t>(i)].total_derivative(j));
        for (int j = 1; j <= sig.n(); ++j)
            omega1_t += wedge(delta_expr(g[static_cast<size_t>(j)]), Form::dx(sig, j));
        HamiltonianMultiform Ht = hamiltonian_multiform(Lt, omega1_t);
        if (!(Ht == H)) {
            rep.gauge_lemma = false;
            if (rep.failure.empty()) rep.failure = "gauge lemma H(L+dw) = H(L)";
        }
    }

    // multiform Hamilton equations generate the same shell
    try {
        std::vector<Expr> ham_eqs = multiform_hamilton_equations(H, Om);
        RewriteSystem rs2 = orient(sig, ham_eqs);
        rep.hamilton_equivalent = record(equivalent_on_shell(rs, rs2),
                                         "Hamilton equations equivalent to E-L equations");
    } catch (const NonOrientable&) {
        rep.hamilton_equivalent = false;
        if (rep.failure.empty()) rep.failure = "Hamilton equations equivalent to E-L equations";
    }
    return rep;
}

} // namespace multiform

#endif
