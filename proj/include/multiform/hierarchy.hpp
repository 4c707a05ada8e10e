// Semantic model of a declared hierarchy: the Lagrangian multiform and its
// companions, plus the parsed declaration (fields, generators, Lagrangian
// coefficients, optional explicit Omega^(1) components).

#ifndef MULTIFORM_HIERARCHY_HPP
#define MULTIFORM_HIERARCHY_HPP

#include "form.hpp"

#include <memory>

namespace multiform {

// L = sum_{i<j} L_ij dx^i ^ dx^j with the convention L_ji = -L_ij.
// Coefficients never depend explicitly on the independent variables.
class LagrangianMultiform {
  public:
    explicit LagrangianMultiform(const Signature& sig) : sig_(&sig) {}

    const Signature& sig() const { return *sig_; }
    int n() const { return sig_->n(); }

    void set(int i, int j, Expr L) {
        if (i == j) throw std::invalid_argument("Lagrangian: L_ii is zero");
        if (i > j) {
            std::swap(i, j);
            L = -L;
        }
        coeffs_[{i, j}] = std::move(L);
    }
    Expr get(int i, int j) const {
        if (i == j) return Expr::zero(*sig_);
        bool flip = i > j;
        if (flip) std::swap(i, j);
        auto it = coeffs_.find({i, j});
        Expr r = it == coeffs_.end() ? Expr::zero(*sig_) : it->second;
        return flip ? -r : r;
    }
    const std::map<std::pair<int, int>, Expr>& coefficients() const { return coeffs_; }

    Form as_form() const {
        Form w(*sig_);
        for (const auto& [ij, L] : coeffs_)
            w += wedge(Form::scalar(L), wedge(Form::dx(*sig_, ij.first), Form::dx(*sig_, ij.second)));
        return w;
    }

  private:
    const Signature* sig_;
    std::map<std::pair<int, int>, Expr> coeffs_;
};

// H = sum_{i<j} H_ij dx^i ^ dx^j; stored by coefficients since the theory
// manipulates the H_ij individually.
class HamiltonianMultiform {
  public:
    explicit HamiltonianMultiform(const Signature& sig) : sig_(&sig) {}

    const Signature& sig() const { return *sig_; }
    void set(int i, int j, Expr H) {
        if (i > j) {
            std::swap(i, j);
            H = -H;
        }
        if (!H.is_zero()) coeffs_[{i, j}] = std::move(H);
    }
    Expr get(int i, int j) const {
        if (i == j) return Expr::zero(*sig_);
        bool flip = i > j;
        if (flip) std::swap(i, j);
        auto it = coeffs_.find({i, j});
        Expr r = it == coeffs_.end() ? Expr::zero(*sig_) : it->second;
        return flip ? -r : r;
    }
    const std::map<std::pair<int, int>, Expr>& coefficients() const { return coeffs_; }

    Form as_form() const {
        Form w(*sig_);
        for (const auto& [ij, H] : coeffs_)
            w += wedge(Form::scalar(H), wedge(Form::dx(*sig_, ij.first), Form::dx(*sig_, ij.second)));
        return w;
    }

    friend bool operator==(const HamiltonianMultiform& a, const HamiltonianMultiform& b) {
        return a.as_form() == b.as_form();
    }

  private:
    const Signature* sig_;
    std::map<std::pair<int, int>, Expr> coeffs_;
};

// Omega = sum_j omega_j ^ dx^j with each omega_j a (2,0)-form.
class SymplecticMultiform {
  public:
    explicit SymplecticMultiform(const Signature& sig) : sig_(&sig) {}

    const Signature& sig() const { return *sig_; }
    void set(int j, Form omega_j) {
        if (!omega_j.is_zero()) comps_[j] = std::move(omega_j);
    }
    Form component(int j) const {
        auto it = comps_.find(j);
        return it == comps_.end() ? Form::zero(*sig_) : it->second;
    }
    const std::map<int, Form>& components() const { return comps_; }

    Form as_form() const {
        Form w(*sig_);
        for (const auto& [j, om] : comps_) w += wedge(om, Form::dx(*sig_, j));
        return w;
    }

    // all jet variables whose delta generators appear in component j (the
    // set I_j of the necessary-form statement)
    std::set<VarId> delta_support(int j) const {
        std::set<VarId> s;
        auto it = comps_.find(j);
        if (it == comps_.end()) return s;
        for (const auto& [k, c] : it->second.terms())
            for (VarId v : k.delta) s.insert(v);
        return s;
    }

  private:
    const Signature* sig_;
    std::map<int, Form> comps_;
};

// A parsed hierarchy declaration.  The signature is heap-allocated and
// pinned: every Expr in the model points at it.
struct HierarchySpec {
    std::string name;
    std::shared_ptr<Signature> signature;
    std::shared_ptr<LagrangianMultiform> lagrangian;
    // optional declared Omega^(1), by direction: theta_j as a (1,0)-form.
    // Used to pick a specific gauge representative when the canonical
    // integration-by-parts strategy would land on a different (equally
    // valid) one.
    std::map<int, Form> declared_omega1;

    const Signature& sig() const { return *signature; }
    bool has_declared_omega1() const { return !declared_omega1.empty(); }
    Form declared_omega1_form() const {
        Form w(*signature);
        for (const auto& [j, th] : declared_omega1) w += wedge(th, Form::dx(*signature, j));
        return w;
    }
};

} // namespace multiform

#endif
