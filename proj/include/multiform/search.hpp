// Conservation-law search by undetermined coefficients.
//
// hamiltonian mode: each F_i is an ansatz over the variables paired by
// omega_i (the necessary form of a Hamiltonian 1-form), a joint vector field
// ansatz is solved against i_xi Omega = delta F, and the flow conditions
// xi_F(H_ij) = 0 are imposed for every pair.  closed mode: F_i ranges over
// space jets and generators and normal_form(dF) = 0 is imposed directly.
//
// Returned laws form a basis of the nontrivial solutions modulo constants
// and modulo exact forms dG with G a 0-form ansatz of the same bounds.

#ifndef MULTIFORM_SEARCH_HPP
#define MULTIFORM_SEARCH_HPP

#include "poisson.hpp"

namespace multiform {

struct AnsatzSpec {
    int max_order = 3;
    int max_degree = 3;
    enum class Mode { Hamiltonian, Closed } mode = Mode::Hamiltonian;
};

namespace search_detail {

// dense coefficient vectors over the F-ansatz coordinates
using Vec = std::vector<Scalar>;

inline bool reduce_mod(Vec& v, const std::vector<Vec>& rref) {
    bool changed = false;
    for (const Vec& r : rref) {
        size_t lead = r.size();
        for (size_t k = 0; k < r.size(); ++k)
            if (!r[k].is_zero()) {
                lead = k;
                break;
            }
        if (lead == r.size()) continue;
        if (v[lead].is_zero()) continue;
        Scalar f = v[lead] / r[lead];
        for (size_t k = lead; k < r.size(); ++k) v[k] -= f * r[k];
        changed = true;
    }
    return changed;
}

inline void rref_insert(std::vector<Vec>& rref, Vec v) {
    reduce_mod(v, rref);
    size_t lead = v.size();
    for (size_t k = 0; k < v.size(); ++k)
        if (!v[k].is_zero()) {
            lead = k;
            break;
        }
    if (lead == v.size()) return;
    Scalar inv = Scalar::one() / v[lead];
    for (size_t k = lead; k < v.size(); ++k) v[k] = v[k] * inv;
    for (Vec& r : rref) {
        if (r[lead].is_zero()) continue;
        Scalar f = r[lead];
        for (size_t k = lead; k < v.size(); ++k) r[k] -= f * v[k];
    }
    rref.push_back(std::move(v));
    std::sort(rref.begin(), rref.end(), [](const Vec& a, const Vec& b) {
        auto lead_of = [](const Vec& x) {
            for (size_t k = 0; k < x.size(); ++k)
                if (!x[k].is_zero()) return k;
            return x.size();
        };
        return lead_of(a) < lead_of(b);
    });
}

} // namespace search_detail

namespace search_detail {

struct SearchOptions {
    bool flow_conditions = true;   // impose xi(H_ij) = 0 (hamiltonian mode)
    bool quotient_trivial = true;  // remove constants and exact forms
};

std::vector<Form> search_impl(const HierarchySpec& h, const DerivedObjects& d,
                              const AnsatzSpec& spec, const SearchOptions& opt);

} // namespace search_detail

inline std::vector<Form> conservation_search(const HierarchySpec& h, const DerivedObjects& d,
                                             const AnsatzSpec& spec) {
    return search_detail::search_impl(h, d, spec, {});
}

// basis of the Hamiltonian 1-forms within the ansatz bounds (no flow
// conditions, trivial directions kept); used to sample admissible forms
inline std::vector<Form> hamiltonian_form_basis(const HierarchySpec& h, const DerivedObjects& d,
                                                int max_order, int max_degree) {
    AnsatzSpec spec{max_order, max_degree, AnsatzSpec::Mode::Hamiltonian};
    return search_detail::search_impl(h, d, spec, {false, false});
}

inline std::vector<Form> search_detail::search_impl(const HierarchySpec& h,
                                                    const DerivedObjects& d, const AnsatzSpec& spec,
                                                    const SearchOptions& opt) {
    const Signature& sig = h.sig();
    const int n = sig.n();
    const bool ham = spec.mode == AnsatzSpec::Mode::Hamiltonian;

    // per-slot variables
    auto slot_vars = [&](int i) {
        std::vector<VarId> vars;
        if (ham) {
            for (VarId v : d.Omega.delta_support(i))
                if (sig.info(v).index.order() <= spec.max_order) vars.push_back(v);
        } else {
            for (size_t f = 0; f < sig.fields().size(); ++f)
                for (int k = 0; k <= spec.max_order; ++k) {
                    MultiIndex idx(n);
                    for (int t = 0; t < k; ++t) idx.bump(1);
                    vars.push_back(sig.jet(static_cast<int>(f), std::move(idx)));
                }
        }
        // generators whose partial support lies inside the slot
        for (size_t g = 0; g < sig.generator_count(); ++g) {
            bool ok = true;
            if (ham) {
                for (const auto& [w, p] : sig.generator(static_cast<int>(g)).partials) {
                    bool found = false;
                    for (VarId v : vars)
                        if (v == w) found = true;
                    if (!found) ok = false;
                }
            }
            if (ok) vars.push_back(sig.gen_var(static_cast<int>(g)));
        }
        return vars;
    };

    // F-ansatz coordinates
    struct Slot {
        int dir;
        std::vector<Monomial> monos;
        size_t base;
    };
    std::vector<Slot> slots;
    size_t nF = 0;
    for (int i = 1; i <= n; ++i) {
        Slot s{i, enumerate_monomials(sig, slot_vars(i), spec.max_degree), nF};
        nF += s.monos.size();
        slots.push_back(std::move(s));
    }

    // vector field ansatz coordinates (hamiltonian mode only)
    std::set<VarId> omega_support;
    for (int i = 1; i <= n; ++i)
        for (VarId v : d.Omega.delta_support(i)) omega_support.insert(v);
    std::vector<VarId> xi_vars(omega_support.begin(), omega_support.end());
    std::vector<VarId> coeff_vars;
    {
        std::set<VarId> u;
        for (const Slot& s : slots)
            for (VarId v : slot_vars(s.dir)) u.insert(v);
        for (VarId v : omega_support) u.insert(v);
        coeff_vars.assign(u.begin(), u.end());
    }
    std::vector<Monomial> xi_monos =
        ham ? enumerate_monomials(sig, coeff_vars, spec.max_degree + 1) : std::vector<Monomial>{};
    size_t nXi = ham ? xi_vars.size() * xi_monos.size() : 0;
    auto xi_unknown = [&](size_t xv, size_t m) { return nF + xv * xi_monos.size() + m; };

    // sparse system assembly
    ScalarLinearSystem sys;
    std::map<std::tuple<int, int, VarId>, std::map<Monomial, size_t, Expr::MonoLess>> row_groups;
    size_t next_row = 0;
    auto row_id = [&](int kind, int a, VarId y, const Monomial& m) {
        auto [git, gfresh] = row_groups.try_emplace(std::make_tuple(kind, a, y),
                                                    std::map<Monomial, size_t, Expr::MonoLess>(
                                                        Expr::MonoLess{&sig}));
        auto [rit, rfresh] = git->second.emplace(m, next_row);
        if (rfresh) ++next_row;
        return rit->second;
    };
    auto scatter = [&](int kind, int a, VarId y, const Expr& e, size_t col, const Scalar& scale) {
        for (const auto& [m, c] : e.terms()) sys.add(row_id(kind, a, y, m), col, scale * c);
    };

    if (ham) {
        // (a)  sum_x c_x [i_{d/dx} omega_i]_{delta y} - dF_i/dy = 0
        for (const Slot& s : slots) {
            for (size_t mi = 0; mi < s.monos.size(); ++mi) {
                Expr mono(&sig);
                mono.add_term(s.monos[mi], Scalar::one());
                for (VarId y : mono.jet_support())
                    scatter(0, s.dir, y, mono.partial(y), s.base + mi, Scalar(-1L));
            }
        }
        for (size_t xv = 0; xv < xi_vars.size(); ++xv) {
            for (int i = 1; i <= n; ++i) {
                Form contracted = interior_vertical(xi_vars[xv], d.Omega.component(i));
                for (const auto& [k, w] : contracted.terms())
                    for (size_t mi = 0; mi < xi_monos.size(); ++mi) {
                        Expr mono(&sig);
                        mono.add_term(xi_monos[mi], Scalar::one());
                        scatter(0, i, k.delta[0], mono * w, xi_unknown(xv, mi), Scalar::one());
                    }
            }
        }
        // (b)  xi(H_ab) = 0 for every pair
        if (opt.flow_conditions)
            for (const auto& [ab, Hab] : d.H.coefficients()) {
                int tag = ab.first * 100 + ab.second;
                for (size_t xv = 0; xv < xi_vars.size(); ++xv) {
                    Expr p = Hab.partial(xi_vars[xv]);
                    if (p.is_zero()) continue;
                    for (size_t mi = 0; mi < xi_monos.size(); ++mi) {
                        Expr mono(&sig);
                        mono.add_term(xi_monos[mi], Scalar::one());
                        scatter(1, tag, 0, mono * p, xi_unknown(xv, mi), Scalar::one());
                    }
                }
            }
    } else {
        // normal_form(dF) = 0
        for (const Slot& s : slots) {
            for (size_t mi = 0; mi < s.monos.size(); ++mi) {
                Expr mono(&sig);
                mono.add_term(s.monos[mi], Scalar::one());
                Form contrib = d.rules.normal_form(
                    horizontal_d(wedge(Form::scalar(mono), Form::dx(sig, s.dir))));
                for (const auto& [k, c] : contrib.terms())
                    scatter(2, k.dx[0] * 100 + k.dx[1], 0, c, s.base + mi, Scalar::one());
            }
        }
    }

    // solution space, projected to F-coordinates
    using search_detail::Vec;
    std::vector<Vec> projected;
    for (const Vec& v : sys.nullspace(nF + nXi)) {
        Vec p(v.begin(), v.begin() + static_cast<long>(nF));
        bool zero = true;
        for (const Scalar& c : p)
            if (!c.is_zero()) {
                zero = false;
                break;
            }
        if (!zero) projected.push_back(std::move(p));
    }
    std::vector<Vec> sol_rref;
    for (Vec& v : projected) search_detail::rref_insert(sol_rref, std::move(v));

    // trivial directions inside the solution span: constants and exact forms
    std::vector<Vec> trivial_rref;
    auto try_trivial = [&](Vec t) {
        Vec probe = t;
        search_detail::reduce_mod(probe, sol_rref);
        for (const Scalar& c : probe)
            if (!c.is_zero()) return;  // not a solution direction
        search_detail::rref_insert(trivial_rref, std::move(t));
    };
    if (opt.quotient_trivial) {
        for (const Slot& s : slots) {
            for (size_t mi = 0; mi < s.monos.size(); ++mi)
                if (s.monos[mi].empty()) {
                    Vec t(nF, Scalar::zero());
                    t[s.base + mi] = Scalar::one();
                    try_trivial(std::move(t));
                }
        }
        // dG for 0-form ansatz G over the union variables
        std::vector<Monomial> gmonos = enumerate_monomials(sig, coeff_vars, spec.max_degree);
        for (const Monomial& gm : gmonos) {
            if (gm.empty()) continue;
            Expr g(&sig);
            g.add_term(gm, Scalar::one());
            Vec t(nF, Scalar::zero());
            bool representable = true;
            for (const Slot& s : slots) {
                Expr dg = g.total_derivative(s.dir);
                for (const auto& [m, c] : dg.terms()) {
                    auto it = std::find(s.monos.begin(), s.monos.end(), m);
                    if (it == s.monos.end()) {
                        representable = false;
                        break;
                    }
                    t[s.base + static_cast<size_t>(it - s.monos.begin())] += c;
                }
                if (!representable) break;
            }
            if (representable) try_trivial(std::move(t));
        }
    }

    // quotient and collect
    std::vector<Form> out;
    std::vector<Vec> reduced;
    for (Vec v : sol_rref) {
        search_detail::reduce_mod(v, trivial_rref);
        bool zero = true;
        for (const Scalar& c : v)
            if (!c.is_zero()) {
                zero = false;
                break;
            }
        if (!zero) search_detail::rref_insert(reduced, std::move(v));
    }
    for (const Vec& v : reduced) {
        Form F(sig);
        for (const Slot& s : slots) {
            Expr fi(&sig);
            for (size_t mi = 0; mi < s.monos.size(); ++mi)
                if (!v[s.base + mi].is_zero()) fi.add_term(s.monos[mi], v[s.base + mi]);
            if (!fi.is_zero()) F += wedge(Form::scalar(fi), Form::dx(sig, s.dir));
        }
        if (!F.is_zero()) out.push_back(std::move(F));
    }
    return out;
}

} // namespace multiform

#endif
