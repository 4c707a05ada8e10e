// The differential algebra A: jet variables u_k^{(i)} over declared fields,
// opaque transcendental generators with user-declared partials and relations,
// and exact sparse polynomial arithmetic with the commuting total derivatives.
//
// A Signature owns the presentation (directions, fields, generators,
// relations) and interns every variable that ever appears; Expr values are
// immutable sparse polynomials over that signature.  All operations are pure.

#ifndef MULTIFORM_ALGEBRA_HPP
#define MULTIFORM_ALGEBRA_HPP

#include "scalar.hpp"

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace multiform {

// Multi-index (i_1,...,i_n): entry j counts derivatives in direction j.
struct MultiIndex {
    std::vector<uint8_t> entries;

    MultiIndex() = default;
    explicit MultiIndex(int n) : entries(static_cast<size_t>(n), 0) {}
    MultiIndex(std::initializer_list<int> dirs_hit, int n) : entries(static_cast<size_t>(n), 0) {
        for (int d : dirs_hit) bump(d);
    }

    int n() const { return static_cast<int>(entries.size()); }
    int order() const {
        int s = 0;
        for (auto e : entries) s += e;
        return s;
    }
    bool is_zero() const { return order() == 0; }
    // 1-based direction position
    void bump(int dir) {
        if (dir < 1 || dir > n()) throw std::out_of_range("MultiIndex: direction out of range");
        ++entries[static_cast<size_t>(dir - 1)];
    }
    int at(int dir) const { return entries[static_cast<size_t>(dir - 1)]; }
    MultiIndex plus(int dir) const {
        MultiIndex r = *this;
        r.bump(dir);
        return r;
    }
    MultiIndex minus(int dir) const {
        MultiIndex r = *this;
        auto& e = r.entries[static_cast<size_t>(dir - 1)];
        if (e == 0) throw std::logic_error("MultiIndex: negative entry");
        --e;
        return r;
    }
    bool contains(const MultiIndex& o) const {
        for (int j = 0; j < n(); ++j)
            if (entries[j] < o.entries[j]) return false;
        return true;
    }
    MultiIndex diff(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (int j = 0; j < n(); ++j) r.entries[j] -= o.entries[j];
        return r;
    }

    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.entries == b.entries; }
    friend bool operator!=(const MultiIndex& a, const MultiIndex& b) { return !(a == b); }
    // graded lex with early directions first: u_1 < u_2 < u_11 < u_12 < ...
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) {
        int oa = a.order(), ob = b.order();
        if (oa != ob) return oa < ob;
        return a.entries > b.entries;
    }
};

using VarId = uint32_t;

enum class VarKind : uint8_t { Jet, Gen };

struct VarInfo {
    VarKind kind;
    int field = -1;    // field id for jets
    MultiIndex index;  // for jets
    int gen = -1;      // generator id for gens
};

class Expr;

// Monomial: sorted (variable, exponent) pairs, the canonical key of a term.
using Monomial = std::vector<std::pair<VarId, int>>;

// A generator relation rewrites one generator power product into an Expr,
// e.g. sin^2 -> 1 - cos^2.  lhs is a pure generator monomial.
struct GenRelation {
    Monomial lhs;
    std::shared_ptr<const Expr> rhs;
};

struct GeneratorDecl {
    std::string name;
    std::string latex;                               // display hint
    std::map<VarId, std::shared_ptr<const Expr>> partials;  // d(gen)/d(jet var)
};

// The finitely presented signature of a hierarchy: directions with labels,
// fields, generators, relations.  Also the intern table for variables.
class Signature {
  public:
    Signature(std::vector<std::string> direction_labels, std::vector<std::string> fields)
        : dir_labels_(std::move(direction_labels)), fields_(std::move(fields)) {
        if (dir_labels_.empty()) throw std::invalid_argument("Signature: no directions");
    }

    int n() const { return static_cast<int>(dir_labels_.size()); }
    const std::vector<std::string>& direction_labels() const { return dir_labels_; }
    const std::vector<std::string>& fields() const { return fields_; }

    int field_id(const std::string& name) const {
        for (size_t k = 0; k < fields_.size(); ++k)
            if (fields_[k] == name) return static_cast<int>(k);
        return -1;
    }
    // Directions are displayed with user labels ("x1","x3","x5"); jets are
    // written against the numeric part of the label.
    int direction_by_label_number(int num) const {
        for (int j = 0; j < n(); ++j)
            if (label_number(j + 1) == num) return j + 1;
        return -1;
    }
    int label_number(int dir) const {
        const std::string& s = dir_labels_[static_cast<size_t>(dir - 1)];
        size_t p = 0;
        while (p < s.size() && !std::isdigit(static_cast<unsigned char>(s[p]))) ++p;
        if (p == s.size()) return dir;
        return std::atoi(s.c_str() + p);
    }

    VarId jet(int field, MultiIndex idx) const {
        if (field < 0 || field >= static_cast<int>(fields_.size()))
            throw std::invalid_argument("Signature: unknown field");
        if (idx.n() != n()) throw std::invalid_argument("Signature: multi-index of wrong length");
        std::lock_guard<std::mutex> lock(mu_);
        JetKey key{field, idx.entries};
        auto it = jet_index_.find(key);
        if (it != jet_index_.end()) return it->second;
        VarId id = static_cast<VarId>(vars_.size());
        vars_.push_back(VarInfo{VarKind::Jet, field, std::move(idx), -1});
        jet_index_.emplace(std::move(key), id);
        return id;
    }
    VarId jet(const std::string& field, std::initializer_list<int> dirs) const {
        int f = field_id(field);
        if (f < 0) throw std::invalid_argument("Signature: unknown field " + field);
        return jet(f, MultiIndex(dirs, n()));
    }

    int add_generator(const std::string& name, const std::string& latex = "") {
        std::lock_guard<std::mutex> lock(mu_);
        for (size_t g = 0; g < gens_.size(); ++g)
            if (gens_[g].name == name) return static_cast<int>(g);
        int gid = static_cast<int>(gens_.size());
        gens_.push_back(GeneratorDecl{name, latex.empty() ? name : latex, {}});
        VarId id = static_cast<VarId>(vars_.size());
        vars_.push_back(VarInfo{VarKind::Gen, -1, MultiIndex(n()), gid});
        gen_var_.push_back(id);
        return gid;
    }
    void set_generator_partial(int gen, VarId wrt, Expr value);
    void add_relation(Monomial lhs, Expr rhs);

    int generator_id(const std::string& name) const {
        for (size_t g = 0; g < gens_.size(); ++g)
            if (gens_[g].name == name) return static_cast<int>(g);
        return -1;
    }
    VarId gen_var(int gen) const { return gen_var_.at(static_cast<size_t>(gen)); }
    const GeneratorDecl& generator(int gen) const { return gens_.at(static_cast<size_t>(gen)); }
    size_t generator_count() const { return gens_.size(); }
    const std::vector<GenRelation>& relations() const { return relations_; }

    // Interning appends only; a deque keeps references stable, so lookups by
    // an already published id need no lock.
    const VarInfo& info(VarId v) const { return vars_[v]; }

    // Canonical variable order: jets by (field, |i|, lex i), generators after.
    bool var_less(VarId a, VarId b) const {
        if (a == b) return false;
        const VarInfo& ia = vars_[a];
        const VarInfo& ib = vars_[b];
        if (ia.kind != ib.kind) return ia.kind == VarKind::Jet;
        if (ia.kind == VarKind::Jet) {
            if (ia.field != ib.field) return ia.field < ib.field;
            return ia.index < ib.index;
        }
        return ia.gen < ib.gen;
    }

    std::string var_name(VarId v) const;

  private:
    struct JetKey {
        int field;
        std::vector<uint8_t> idx;
        bool operator<(const JetKey& o) const {
            if (field != o.field) return field < o.field;
            return idx < o.idx;
        }
    };
    std::vector<std::string> dir_labels_;
    std::vector<std::string> fields_;
    std::vector<GeneratorDecl> gens_;
    std::vector<VarId> gen_var_;
    std::vector<GenRelation> relations_;
    mutable std::mutex mu_;
    mutable std::deque<VarInfo> vars_;
    mutable std::map<JetKey, VarId> jet_index_;
};

inline bool mono_divides(const Monomial& d, const Monomial& m) {
    size_t i = 0;
    for (const auto& [v, e] : d) {
        while (i < m.size() && m[i].first != v) ++i;
        if (i == m.size() || m[i].second < e) return false;
    }
    return true;
}

// Exact sparse polynomial over a Signature.  Canonical form: sorted monomial
// keys, no zero coefficients, generator relations fully applied.
class Expr {
  public:
    struct MonoLess {
        const Signature* sig = nullptr;
        bool operator()(const Monomial& a, const Monomial& b) const {
            int da = 0, db = 0;
            for (auto& [v, e] : a) da += e;
            for (auto& [v, e] : b) db += e;
            if (da != db) return da < db;
            size_t i = 0, j = 0;
            while (i < a.size() && j < b.size()) {
                if (a[i].first != b[j].first) return sig->var_less(a[i].first, b[j].first);
                if (a[i].second != b[j].second) return a[i].second > b[j].second;
                ++i;
                ++j;
            }
            return i == a.size() && j != b.size();
        }
    };
    using TermMap = std::map<Monomial, Scalar, MonoLess>;

    explicit Expr(const Signature* sig) : sig_(sig), terms_(MonoLess{sig}) {}
    // placeholder slot; only assignment and is_zero are meaningful until a
    // real value is stored
    Expr() : Expr(nullptr) {}

    static Expr zero(const Signature& sig) { return Expr(&sig); }
    static Expr constant(const Signature& sig, Scalar c) {
        Expr e(&sig);
        if (!c.is_zero()) e.terms_.emplace(Monomial{}, std::move(c));
        return e;
    }
    static Expr var(const Signature& sig, VarId v) {
        Expr e(&sig);
        e.terms_.emplace(Monomial{{v, 1}}, Scalar::one());
        return e;
    }
    static Expr jet(const Signature& sig, const std::string& field, std::initializer_list<int> dirs) {
        return var(sig, sig.jet(field, dirs));
    }

    const Signature& sig() const { return *sig_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
    }
    Scalar constant_part() const {
        auto it = terms_.find(Monomial{});
        return it == terms_.end() ? Scalar::zero() : it->second;
    }

    void add_term(Monomial m, Scalar c) {
        if (c.is_zero()) return;
        reduce_and_accumulate(std::move(m), std::move(c), 0);
    }

    Expr operator-() const {
        Expr r(sig_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    Expr& operator+=(const Expr& o) {
        check_sig(o);
        for (const auto& [m, c] : o.terms_) accumulate(m, c);
        return *this;
    }
    Expr& operator-=(const Expr& o) {
        check_sig(o);
        for (const auto& [m, c] : o.terms_) accumulate(m, -c);
        return *this;
    }
    friend Expr operator+(Expr a, const Expr& b) { return a += b; }
    friend Expr operator-(Expr a, const Expr& b) { return a -= b; }

    friend Expr operator*(const Expr& a, const Expr& b) {
        a.check_sig(b);
        Expr r(a.sig_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m = mono_mul(a.sig(), ma, mb);
                r.add_term(std::move(m), ca * cb);
            }
        return r;
    }
    Expr& operator*=(const Expr& o) { return *this = *this * o; }
    friend Expr operator*(const Scalar& c, const Expr& e) {
        Expr r(e.sig_);
        if (c.is_zero()) return r;
        for (const auto& [m, k] : e.terms_) r.terms_.emplace(m, c * k);
        return r;
    }
    friend Expr operator*(const Expr& e, const Scalar& c) { return c * e; }

    Expr pow(int k) const {
        if (k < 0) throw std::domain_error("Expr: negative power");
        Expr r = constant(sig(), Scalar::one());
        for (int j = 0; j < k; ++j) r = r * *this;
        return r;
    }

    friend bool operator==(const Expr& a, const Expr& b) {
        if (a.sig_ != b.sig_) return false;
        if (a.terms_.size() != b.terms_.size()) return false;
        auto ia = a.terms_.begin();
        auto ib = b.terms_.begin();
        for (; ia != a.terms_.end(); ++ia, ++ib)
            if (ia->first != ib->first || ia->second != ib->second) return false;
        return true;
    }
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

    // partial derivative with respect to a jet variable, chain rule through
    // generator partials
    Expr partial(VarId x) const {
        Expr r(sig_);
        for (const auto& [m, c] : terms_) {
            for (size_t k = 0; k < m.size(); ++k) {
                const auto [v, e] = m[k];
                if (v == x) {
                    Monomial rest = m;
                    if (e == 1)
                        rest.erase(rest.begin() + static_cast<long>(k));
                    else
                        rest[k].second = e - 1;
                    r.add_term(std::move(rest), c * Scalar(e));
                } else if (sig_->info(v).kind == VarKind::Gen) {
                    const GeneratorDecl& g = sig_->generator(sig_->info(v).gen);
                    auto it = g.partials.find(x);
                    if (it == g.partials.end()) continue;
                    Monomial rest = m;
                    if (e == 1)
                        rest.erase(rest.begin() + static_cast<long>(k));
                    else
                        rest[k].second = e - 1;
                    Expr piece(sig_);
                    piece.add_term(std::move(rest), c * Scalar(e));
                    r += piece * *it->second;
                }
            }
        }
        return r;
    }

    // all jet variables on which the expression depends, including through
    // generator partial supports
    std::set<VarId> jet_support() const {
        std::set<VarId> s;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m) {
                const VarInfo& vi = sig_->info(v);
                if (vi.kind == VarKind::Jet)
                    s.insert(v);
                else
                    for (const auto& [w, p] : sig_->generator(vi.gen).partials) s.insert(w);
            }
        return s;
    }

    // total derivative d/dx_j; equals the vertical field action for the
    // x-independent algebra used here
    Expr total_derivative(int dir) const {
        Expr r(sig_);
        for (VarId x : jet_support()) {
            Expr p = partial(x);
            if (p.is_zero()) continue;
            const VarInfo& vi = sig_->info(x);
            r += p * var(*sig_, sig_->jet(vi.field, vi.index.plus(dir)));
        }
        return r;
    }

    Expr multi_derivative(const MultiIndex& idx) const {
        Expr r = *this;
        for (int j = 1; j <= idx.n(); ++j)
            for (int k = 0; k < idx.at(j); ++k) r = r.total_derivative(j);
        return r;
    }

    // substitute jet variable -> replacement, exactly once over all terms
    Expr substitute(VarId x, const Expr& rep) const {
        Expr r(sig_);
        for (const auto& [m, c] : terms_) {
            int e = 0;
            Monomial rest;
            rest.reserve(m.size());
            for (const auto& [v, k] : m) {
                if (v == x)
                    e = k;
                else
                    rest.emplace_back(v, k);
            }
            if (e == 0) {
                r.accumulate(m, c);
            } else {
                Expr piece(sig_);
                piece.add_term(std::move(rest), c);
                r += piece * rep.pow(e);
            }
        }
        return r;
    }

    bool depends_on(VarId x) const {
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m)
                if (v == x) return true;
        return false;
    }

    int total_degree() const {
        int d = 0;
        for (const auto& [m, c] : terms_) {
            int dm = 0;
            for (const auto& [v, e] : m) dm += e;
            d = std::max(d, dm);
        }
        return d;
    }
    int max_jet_order() const {
        int d = 0;
        for (const auto& [m, c] : terms_)
            for (const auto& [v, e] : m) {
                const VarInfo& vi = sig_->info(v);
                if (vi.kind == VarKind::Jet) d = std::max(d, vi.index.order());
            }
        return d;
    }

    // coefficient of a monomial in canonical form
    Scalar coeff(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Scalar::zero() : it->second;
    }
    const std::pair<const Monomial, Scalar>& leading_term() const {
        if (terms_.empty()) throw std::logic_error("Expr: leading term of zero");
        return *terms_.rbegin();
    }

    static Monomial mono_mul(const Signature& sig, const Monomial& a, const Monomial& b) {
        Monomial r;
        r.reserve(a.size() + b.size());
        size_t i = 0, j = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i].first == b[j].first) {
                r.emplace_back(a[i].first, a[i].second + b[j].second);
                ++i;
                ++j;
            } else if (sig.var_less(a[i].first, b[j].first)) {
                r.push_back(a[i++]);
            } else {
                r.push_back(b[j++]);
            }
        }
        for (; i < a.size(); ++i) r.push_back(a[i]);
        for (; j < b.size(); ++j) r.push_back(b[j]);
        return r;
    }

  private:
    void check_sig(const Expr& o) const {
        if (sig_ != o.sig_) throw std::logic_error("Expr: mixed signatures");
    }
    void accumulate(const Monomial& m, const Scalar& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    // apply generator relations until the monomial is irreducible
    void reduce_and_accumulate(Monomial m, Scalar c, int depth) {
        if (depth > 64) throw std::runtime_error("Expr: generator relations do not terminate");
        for (const auto& rel : sig_->relations()) {
            if (!mono_divides(rel.lhs, m)) continue;
            Monomial rest;
            rest.reserve(m.size());
            size_t i = 0;
            for (const auto& [v, e] : m) {
                int sub = 0;
                while (i < rel.lhs.size() && sig_->var_less(rel.lhs[i].first, v)) ++i;
                if (i < rel.lhs.size() && rel.lhs[i].first == v) sub = rel.lhs[i].second;
                if (e - sub > 0) rest.emplace_back(v, e - sub);
            }
            for (const auto& [mr, cr] : rel.rhs->terms())
                reduce_and_accumulate(mono_mul(*sig_, mr, rest), c * cr, depth + 1);
            return;
        }
        accumulate(m, c);
    }

    const Signature* sig_;
    TermMap terms_;
};

inline void Signature::set_generator_partial(int gen, VarId wrt, Expr value) {
    gens_.at(static_cast<size_t>(gen)).partials[wrt] =
        std::make_shared<const Expr>(std::move(value));
}

inline void Signature::add_relation(Monomial lhs, Expr rhs) {
    relations_.push_back(GenRelation{std::move(lhs), std::make_shared<const Expr>(std::move(rhs))});
}

inline std::string Signature::var_name(VarId v) const {
    const VarInfo& vi = info(v);
    if (vi.kind == VarKind::Gen) return gens_[static_cast<size_t>(vi.gen)].name;
    std::string s = fields_[static_cast<size_t>(vi.field)];
    if (!vi.index.is_zero()) {
        s += "[";
        bool first = true;
        for (int j = 1; j <= vi.index.n(); ++j)
            for (int k = 0; k < vi.index.at(j); ++k) {
                if (!first) s += ",";
                s += std::to_string(label_number(j));
                first = false;
            }
        s += "]";
    }
    return s;
}

// convenience: normalize is the identity on this representation (construction
// canonicalizes); exposed for spec parity and tests
inline Expr normalize(const Expr& e) {
    Expr r(&e.sig());
    for (const auto& [m, c] : e.terms()) r.add_term(m, c);
    return r;
}

} // namespace multiform

#endif
