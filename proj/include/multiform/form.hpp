// (p,q)-forms over the differential algebra, the derivations d and delta,
// wedge and interior products, and the vertical fields used throughout:
// the lazily-acting shifts and multivector fields built from wedges of
// vertical generators with at most one horizontal factor.
//
// Canonical form keys are strictly sorted; all reordering signs are absorbed
// into coefficients, so Form equality is structural.

#ifndef MULTIFORM_FORM_HPP
#define MULTIFORM_FORM_HPP

#include "algebra.hpp"

#include <optional>

namespace multiform {

// delta factors: jet variable ids, strictly ascending in the variable order;
// dx factors: direction positions (1-based), strictly ascending
struct FormKey {
    std::vector<VarId> delta;
    std::vector<int> dx;
};

// The vertical shift field  ~d_i = sum u_k^{(j)+e_i} d/du_k^{(j)}.
// The infinite sum is never materialized; only the finitely many delta
// generators of a given form are acted on.
struct VerticalShift {
    int dir;
};

// Sum of wedges of vertical generators with at most one horizontal factor.
// General r-vectors are rejected at construction.
class MultiVector {
  public:
    struct Key {
        std::vector<VarId> vertical;  // strictly ascending
        std::optional<int> horizontal;
    };
    struct KeyLess {
        const Signature* sig;
        bool operator()(const Key& a, const Key& b) const {
            if (a.vertical.size() != b.vertical.size()) return a.vertical.size() < b.vertical.size();
            for (size_t i = 0; i < a.vertical.size(); ++i)
                if (a.vertical[i] != b.vertical[i]) return sig->var_less(a.vertical[i], b.vertical[i]);
            int ha = a.horizontal ? *a.horizontal : 0;
            int hb = b.horizontal ? *b.horizontal : 0;
            return ha < hb;
        }
    };
    using TermMap = std::map<Key, Expr, KeyLess>;

    explicit MultiVector(const Signature& sig) : sig_(&sig), terms_(KeyLess{&sig}) {}

    static MultiVector vertical(const Signature& sig, VarId v, Expr coeff) {
        MultiVector r(sig);
        r.add(Key{{v}, std::nullopt}, std::move(coeff));
        return r;
    }
    static MultiVector vertical(const Signature& sig, VarId v) {
        return vertical(sig, v, Expr::constant(sig, Scalar::one()));
    }
    static MultiVector horizontal(const Signature& sig, int dir) {
        MultiVector r(sig);
        r.add(Key{{}, dir}, Expr::constant(sig, Scalar::one()));
        return r;
    }
    // vertical generator wedged with a horizontal one, coefficient in A
    static MultiVector bivector(const Signature& sig, VarId v, int dir, Expr coeff) {
        MultiVector r(sig);
        r.add(Key{{v}, dir}, std::move(coeff));
        return r;
    }

    const Signature& sig() const { return *sig_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(Key k, Expr c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.emplace(std::move(k), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    MultiVector& operator+=(const MultiVector& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    friend MultiVector operator+(MultiVector a, const MultiVector& b) { return a += b; }
    friend MultiVector operator*(const Expr& e, MultiVector v) {
        MultiVector r(v.sig());
        for (const auto& [k, c] : v.terms_) r.add(k, e * c);
        return r;
    }
    MultiVector operator-() const {
        MultiVector r(*sig_);
        for (const auto& [k, c] : terms_) r.add(k, -c);
        return r;
    }
    friend MultiVector operator-(MultiVector a, const MultiVector& b) { return a += -b; }

    friend bool operator==(const MultiVector& a, const MultiVector& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        for (; ia != a.terms_.end(); ++ia, ++ib)
            if (ia->first.vertical != ib->first.vertical ||
                ia->first.horizontal != ib->first.horizontal || ia->second != ib->second)
            return false;
        return true;
    }

    // wedge of two tems; more than one horizontal factor is rejected
    friend MultiVector wedge(const MultiVector& a, const MultiVector& b) {
        MultiVector r(a.sig());
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                if (ka.horizontal && kb.horizontal)
                    throw std::invalid_argument(
                        "MultiVector: wedges with more than one horizontal factor are not supported");
                // all generators here are odd; sign from sorting the
                // concatenation [ka.vertical, ka.h?, kb.vertical, kb.h?]
                int sign = 1;
                std::vector<VarId> merged;
                merged.reserve(ka.vertical.size() + kb.vertical.size());
                // kb's horizontal factor must cross ka's verticals... handled
                // below; vertical merge first
                {
                    size_t i = 0, j = 0;
                    bool dup = false;
                    int inversions = 0;
                    while (i < ka.vertical.size() && j < kb.vertical.size()) {
                        if (ka.vertical[i] == kb.vertical[j]) {
                            dup = true;
                            break;
                        }
                        if (a.sig().var_less(kb.vertical[j], ka.vertical[i])) {
                            inversions += static_cast<int>(ka.vertical.size() - i);
                            merged.push_back(kb.vertical[j++]);
                        } else {
                            merged.push_back(ka.vertical[i++]);
                        }
                    }
                    if (dup) continue;
                    for (; i < ka.vertical.size(); ++i) merged.push_back(ka.vertical[i]);
                    for (; j < kb.vertical.size(); ++j) merged.push_back(kb.vertical[j]);
                    if (inversions % 2) sign = -sign;
                }
                std::optional<int> h;
                if (ka.horizontal) {
                    h = ka.horizontal;
                    // ka's horizontal factor crosses kb's verticals to reach the end
                    if (kb.vertical.size() % 2) sign = -sign;
                } else if (kb.horizontal) {
                    h = kb.horizontal;
                }
                Expr c = ca * cb;
                if (sign < 0) c = -c;
                r.add(Key{std::move(merged), h}, std::move(c));
            }
        return r;
    }

  private:
    const Signature* sig_;
    TermMap terms_;
};

class Form {
  public:
    struct KeyLess {
        const Signature* sig;
        bool operator()(const FormKey& a, const FormKey& b) const {
            if (a.delta.size() != b.delta.size()) return a.delta.size() < b.delta.size();
            if (a.dx.size() != b.dx.size()) return a.dx.size() < b.dx.size();
            if (a.dx != b.dx) return a.dx < b.dx;
            for (size_t i = 0; i < a.delta.size(); ++i)
                if (a.delta[i] != b.delta[i]) return sig->var_less(a.delta[i], b.delta[i]);
            return false;
        }
    };
    using TermMap = std::map<FormKey, Expr, KeyLess>;

    explicit Form(const Signature& sig) : sig_(&sig), terms_(KeyLess{&sig}) {}
    // placeholder slot, as for Expr
    Form() : sig_(nullptr), terms_(KeyLess{nullptr}) {}

    static Form zero(const Signature& sig) { return Form(sig); }
    static Form scalar(Expr e) {
        Form r(e.sig());
        r.add(FormKey{}, std::move(e));
        return r;
    }
    static Form dx(const Signature& sig, int dir) {
        Form r(sig);
        r.add(FormKey{{}, {dir}}, Expr::constant(sig, Scalar::one()));
        return r;
    }
    static Form delta_var(const Signature& sig, VarId v) {
        Form r(sig);
        r.add(FormKey{{v}, {}}, Expr::constant(sig, Scalar::one()));
        return r;
    }
    // coefficient * delta factors * dx factors, with sorting signs absorbed
    static Form term(const Signature& sig, Expr coeff, std::vector<VarId> deltas,
                     std::vector<int> dxs) {
        Form r = scalar(std::move(coeff));
        for (VarId v : deltas) r = wedge(r, delta_var(sig, v));
        for (int j : dxs) r = wedge(r, dx(sig, j));
        return r;
    }

    const Signature& sig() const { return *sig_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // bidegree (p,q); mixed-degree forms are not used by the engine
    std::pair<int, int> bidegree() const {
        if (terms_.empty()) return {0, 0};
        auto& k = terms_.begin()->first;
        return {static_cast<int>(k.delta.size()), static_cast<int>(k.dx.size())};
    }
    bool homogeneous() const {
        auto [p, q] = bidegree();
        for (const auto& [k, c] : terms_)
            if (static_cast<int>(k.delta.size()) != p || static_cast<int>(k.dx.size()) != q)
                return false;
        return true;
    }

    void add(FormKey k, Expr c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.emplace(std::move(k), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    Form operator-() const {
        Form r(*sig_);
        for (const auto& [k, c] : terms_) r.add(k, -c);
        return r;
    }
    Form& operator+=(const Form& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    Form& operator-=(const Form& o) {
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    friend Form operator+(Form a, const Form& b) { return a += b; }
    friend Form operator-(Form a, const Form& b) { return a -= b; }
    friend Form operator*(const Expr& e, const Form& w) {
        Form r(w.sig());
        for (const auto& [k, c] : w.terms_) r.add(k, e * c);
        return r;
    }
    friend Form operator*(const Scalar& s, const Form& w) {
        Form r(w.sig());
        for (const auto& [k, c] : w.terms_) r.add(k, s * c);
        return r;
    }

    friend bool operator==(const Form& a, const Form& b) {
        if (a.terms_.size() != b.terms_.size()) return false;
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        for (; ia != a.terms_.end(); ++ia, ++ib)
            if (ia->first.delta != ib->first.delta || ia->first.dx != ib->first.dx ||
                ia->second != ib->second)
                return false;
        return true;
    }
    friend bool operator!=(const Form& a, const Form& b) { return !(a == b); }

    Expr coefficient(const FormKey& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? Expr::zero(*sig_) : it->second;
    }

    // graded exterior product
    friend Form wedge(const Form& a, const Form& b) {
        Form r(a.sig());
        const Signature& sig = a.sig();
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                int sign = 1;
                // kb.delta crosses ka.dx
                if ((kb.delta.size() * ka.dx.size()) % 2) sign = -sign;
                // merge deltas
                std::vector<VarId> delta;
                delta.reserve(ka.delta.size() + kb.delta.size());
                {
                    size_t i = 0, j = 0;
                    bool dup = false;
                    int inv = 0;
                    while (i < ka.delta.size() && j < kb.delta.size()) {
                        if (ka.delta[i] == kb.delta[j]) {
                            dup = true;
                            break;
                        }
                        if (sig.var_less(kb.delta[j], ka.delta[i])) {
                            inv += static_cast<int>(ka.delta.size() - i);
                            delta.push_back(kb.delta[j++]);
                        } else {
                            delta.push_back(ka.delta[i++]);
                        }
                    }
                    if (dup) continue;
                    for (; i < ka.delta.size(); ++i) delta.push_back(ka.delta[i]);
                    for (; j < kb.delta.size(); ++j) delta.push_back(kb.delta[j]);
                    if (inv % 2) sign = -sign;
                }
                // merge dx
                std::vector<int> dxs;
                dxs.reserve(ka.dx.size() + kb.dx.size());
                {
                    size_t i = 0, j = 0;
                    bool dup = false;
                    int inv = 0;
                    while (i < ka.dx.size() && j < kb.dx.size()) {
                        if (ka.dx[i] == kb.dx[j]) {
                            dup = true;
                            break;
                        }
                        if (kb.dx[j] < ka.dx[i]) {
                            inv += static_cast<int>(ka.dx.size() - i);
                            dxs.push_back(kb.dx[j++]);
                        } else {
                            dxs.push_back(ka.dx[i++]);
                        }
                    }
                    if (dup) continue;
                    for (; i < ka.dx.size(); ++i) dxs.push_back(ka.dx[i]);
                    for (; j < kb.dx.size(); ++j) dxs.push_back(kb.dx[j]);
                    if (inv % 2) sign = -sign;
                }
                Expr c = ca * cb;
                if (sign < 0) c = -c;
                r.add(FormKey{std::move(delta), std::move(dxs)}, std::move(c));
            }
        return r;
    }

  private:
    const Signature* sig_;
    TermMap terms_;
};

// delta of a scalar: sum over jet variables of (df/du) delta u
inline Form delta_expr(const Expr& f) {
    Form r(f.sig());
    for (VarId x : f.jet_support()) {
        Expr p = f.partial(x);
        if (!p.is_zero()) r.add(FormKey{{x}, {}}, std::move(p));
    }
    return r;
}

// d of a scalar: sum of total derivatives against dx^j
inline Form d_expr(const Expr& f) {
    Form r(f.sig());
    const Signature& sig = f.sig();
    for (int j = 1; j <= sig.n(); ++j) {
        Expr t = f.total_derivative(j);
        if (!t.is_zero()) r.add(FormKey{{}, {j}}, std::move(t));
    }
    return r;
}

namespace detail {
// d of a basis key (coefficient one), by graded recursion on the leading
// delta factor; dx-only keys are d-closed
inline Form d_key(const Signature& sig, const FormKey& key) {
    if (key.delta.empty()) return Form::zero(sig);
    VarId y = key.delta.front();
    FormKey rest{std::vector<VarId>(key.delta.begin() + 1, key.delta.end()), key.dx};
    Form rest_form(sig);
    rest_form.add(rest, Expr::constant(sig, Scalar::one()));

    // d(delta u^{(a)}) = - sum_j delta u^{(a+e_j)} ^ dx^j
    Form dy(sig);
    const VarInfo& vi = sig.info(y);
    for (int j = 1; j <= sig.n(); ++j)
        dy.add(FormKey{{sig.jet(vi.field, vi.index.plus(j))}, {j}},
               Expr::constant(sig, Scalar(-1L)));

    Form r = wedge(dy, rest_form);
    // - delta y ^ d(rest): the leading delta factor is odd
    Form drest = d_key(sig, rest);
    if (!drest.is_zero()) r -= wedge(Form::delta_var(sig, y), drest);
    return r;
}
} // namespace detail

// horizontal differential: (p,q) -> (p,q+1)
inline Form horizontal_d(const Form& w) {
    const Signature& sig = w.sig();
    Form r(sig);
    for (const auto& [k, c] : w.terms()) {
        Form key_form(sig);
        key_form.add(k, Expr::constant(sig, Scalar::one()));
        r += wedge(d_expr(c), key_form);
        r += c * detail::d_key(sig, k);
    }
    return r;
}

// vertical differential: (p,q) -> (p+1,q); delta and dx generators are
// delta-closed, so only coefficients contribute
inline Form vertical_delta(const Form& w) {
    const Signature& sig = w.sig();
    Form r(sig);
    for (const auto& [k, c] : w.terms()) {
        Form key_form(sig);
        key_form.add(k, Expr::constant(sig, Scalar::one()));
        r += wedge(delta_expr(c), key_form);
    }
    return r;
}

// interior product with a single vertical generator d/d(var)
inline Form interior_vertical(VarId x, const Form& w) {
    Form r(w.sig());
    for (const auto& [k, c] : w.terms()) {
        for (size_t p = 0; p < k.delta.size(); ++p) {
            if (k.delta[p] != x) continue;
            FormKey nk = k;
            nk.delta.erase(nk.delta.begin() + static_cast<long>(p));
            r.add(std::move(nk), (p % 2) ? -c : c);
            break;
        }
    }
    return r;
}

// interior product with a horizontal generator d/dx^j
inline Form interior_horizontal(int dir, const Form& w) {
    Form r(w.sig());
    for (const auto& [k, c] : w.terms()) {
        for (size_t p = 0; p < k.dx.size(); ++p) {
            if (k.dx[p] != dir) continue;
            FormKey nk = k;
            nk.dx.erase(nk.dx.begin() + static_cast<long>(p));
            bool neg = (k.delta.size() + p) % 2;
            r.add(std::move(nk), neg ? -c : c);
            break;
        }
    }
    return r;
}

// interior product with the vertical shift; only the finitely many delta
// generators present act
inline Form interior(const VerticalShift& t, const Form& w) {
    const Signature& sig = w.sig();
    Form r(sig);
    for (const auto& [k, c] : w.terms()) {
        for (size_t p = 0; p < k.delta.size(); ++p) {
            const VarInfo& vi = sig.info(k.delta[p]);
            Expr shifted = Expr::var(sig, sig.jet(vi.field, vi.index.plus(t.dir)));
            FormKey nk = k;
            nk.delta.erase(nk.delta.begin() + static_cast<long>(p));
            Expr coeff = shifted * c;
            r.add(std::move(nk), (p % 2) ? -coeff : coeff);
        }
    }
    return r;
}

// graded interior product with a multivector: wedge factors apply
// right-to-left, the horizontal factor first
inline Form interior(const MultiVector& xi, const Form& w) {
    Form r(w.sig());
    for (const auto& [k, c] : xi.terms()) {
        Form cur = w;
        if (k.horizontal) cur = interior_horizontal(*k.horizontal, cur);
        for (auto it = k.vertical.rbegin(); it != k.vertical.rend(); ++it)
            cur = interior_vertical(*it, cur);
        r += c * cur;
    }
    return r;
}

// the vertical field ~d_i acting as a derivation on forms: shifts
// coefficients and delta generators
inline Form tilde_derive(const VerticalShift& t, const Form& w) {
    const Signature& sig = w.sig();
    Form r(sig);
    for (const auto& [k, c] : w.terms()) {
        r.add(k, c.total_derivative(t.dir));
        for (size_t p = 0; p < k.delta.size(); ++p) {
            const VarInfo& vi = sig.info(k.delta[p]);
            VarId shifted = sig.jet(vi.field, vi.index.plus(t.dir));
            // rebuild the key with slot p replaced; re-sorting signs included
            std::vector<VarId> deltas;
            for (size_t q = 0; q < k.delta.size(); ++q) deltas.push_back(q == p ? shifted : k.delta[q]);
            r += Form::term(sig, c, deltas, k.dx);
        }
    }
    return r;
}

} // namespace multiform

#endif
