// Exact linear algebra used by the engine:
//   * fraction-free Gaussian elimination over the polynomial algebra, with
//     exact-division checks, kernel extraction and inconsistency
//     certificates (for Hamiltonian vector field solves);
//   * a sparse reduced-row-echelon solver over the scalar field Q(i) (for
//     undetermined-coefficient ansatz systems).

#ifndef MULTIFORM_LINSOLVE_HPP
#define MULTIFORM_LINSOLVE_HPP

#include "algebra.hpp"

#include <functional>
#include <optional>
#include <unordered_map>

namespace multiform {

// exact multivariate division via leading-term recursion; nullopt when the
// divisor does not divide exactly (or the quotient is not visible through
// the monomial order, which does not happen for relation-free operands)
inline std::optional<Expr> try_divide(const Expr& num, const Expr& den) {
    if (den.is_zero()) return std::nullopt;
    const Signature& sig = num.sig();
    Expr r = num;
    Expr q(&sig);
    const auto& [dm, dc] = den.leading_term();
    int guard = 0;
    while (!r.is_zero()) {
        if (++guard > 100000) return std::nullopt;
        const auto& [rm, rc] = r.leading_term();
        // monomial quotient rm / dm
        Monomial quot;
        {
            size_t i = 0;
            bool ok = true;
            for (const auto& [v, e] : rm) {
                int sub = 0;
                while (i < dm.size() && sig.var_less(dm[i].first, v)) {
                    ok = false;
                    break;
                }
                if (!ok) break;
                if (i < dm.size() && dm[i].first == v) {
                    sub = dm[i].second;
                    ++i;
                }
                if (e < sub) {
                    ok = false;
                    break;
                }
                if (e > sub) quot.emplace_back(v, e - sub);
            }
            if (i != dm.size()) ok = false;
            if (!ok) return std::nullopt;
        }
        Expr t(&sig);
        t.add_term(std::move(quot), rc / dc);
        q += t;
        r -= t * den;
    }
    return q;
}

// numerator/denominator pair with opportunistic exact simplification
struct FracExpr {
    Expr num;
    Expr den;

    explicit FracExpr(const Signature& sig)
        : num(Expr::zero(sig)), den(Expr::constant(sig, Scalar::one())) {}
    FracExpr(Expr n, Expr d) : num(std::move(n)), den(std::move(d)) { simplify(); }
    static FracExpr of(Expr n) {
        const Signature& sig = n.sig();
        return FracExpr(std::move(n), Expr::constant(sig, Scalar::one()));
    }

    bool is_zero() const { return num.is_zero(); }
    bool den_is_one() const {
        return den.is_constant() && den.constant_part().is_one();
    }
    void simplify() {
        if (num.is_zero()) {
            den = Expr::constant(num.sig(), Scalar::one());
            return;
        }
        if (den.is_constant()) {
            num = (Scalar::one() / den.constant_part()) * num;
            den = Expr::constant(num.sig(), Scalar::one());
            return;
        }
        if (auto q = try_divide(num, den)) {
            num = std::move(*q);
            den = Expr::constant(num.sig(), Scalar::one());
        }
    }
    FracExpr operator-() const { return FracExpr(-num, den); }
    friend FracExpr operator+(const FracExpr& a, const FracExpr& b) {
        return FracExpr(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend FracExpr operator-(const FracExpr& a, const FracExpr& b) {
        return FracExpr(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend FracExpr operator*(const FracExpr& a, const FracExpr& b) {
        return FracExpr(a.num * b.num, a.den * b.den);
    }
    friend FracExpr operator/(const FracExpr& a, const FracExpr& b) {
        return FracExpr(a.num * b.den, a.den * b.num);
    }
};

// Dense linear system over the polynomial algebra.  Solutions are reported
// with an explicit common denominator so a genuinely rational solution is
// visible to the caller rather than silently accepted.
class ExprLinearSystem {
  public:
    explicit ExprLinearSystem(const Signature& sig, size_t unknowns)
        : sig_(&sig), cols_(unknowns) {}

    void add_row(std::vector<Expr> coeffs, Expr rhs) {
        if (coeffs.size() != cols_) throw std::invalid_argument("ExprLinearSystem: row width");
        rows_.push_back(Row{std::move(coeffs), std::move(rhs)});
    }
    size_t unknowns() const { return cols_; }

    struct Solution {
        bool consistent = true;
        Expr inconsistency;                // a nonzero residual that must vanish
        std::vector<Expr> particular;      // numerators, free unknowns set to zero
        Expr denominator;                  // common denominator of the particular solution
        bool polynomial = true;            // denominator reduced to one
        std::vector<std::vector<Expr>> kernel;  // polynomial kernel basis
    };

    Solution solve() const {
        const Signature& sig = *sig_;
        size_t m = rows_.size();
        std::vector<std::vector<Expr>> M;
        M.reserve(m);
        for (const Row& r : rows_) {
            std::vector<Expr> row = r.a;
            row.push_back(r.b);
            M.push_back(std::move(row));
        }
        size_t w = cols_ + 1;

        std::vector<size_t> pivot_row_of_col(cols_, SIZE_MAX);
        std::vector<size_t> pivot_cols;
        size_t next_row = 0;
        for (size_t c = 0; c < cols_ && next_row < m; ++c) {
            // pick the structurally simplest nonzero pivot
            size_t best = SIZE_MAX;
            for (size_t r = next_row; r < m; ++r) {
                if (M[r][c].is_zero()) continue;
                if (best == SIZE_MAX || M[r][c].size() < M[best][c].size() ||
                    (M[r][c].size() == M[best][c].size() && M[r][c].is_constant() &&
                     !M[best][c].is_constant()))
                    best = r;
            }
            if (best == SIZE_MAX) continue;
            std::swap(M[next_row], M[best]);
            for (size_t r = 0; r < m; ++r) {
                if (r == next_row || M[r][c].is_zero()) continue;
                // cross-multiplication step; exactness is restored during
                // back-substitution, entries stay in the algebra
                Expr p = M[next_row][c];
                Expr f = M[r][c];
                for (size_t j = 0; j < w; ++j) M[r][j] = p * M[r][j] - f * M[next_row][j];
            }
            pivot_row_of_col[c] = next_row;
            pivot_cols.push_back(c);
            ++next_row;
        }

        Solution out;
        // consistency: a row with zero coefficients but nonzero rhs
        for (size_t r = next_row; r < m; ++r) {
            bool allzero = true;
            for (size_t c = 0; c < cols_; ++c)
                if (!M[r][c].is_zero()) {
                    allzero = false;
                    break;
                }
            if (allzero && !M[r][cols_].is_zero()) {
                out.consistent = false;
                out.inconsistency = M[r][cols_];
                return out;
            }
        }

        // particular solution with free unknowns zero; the eliminated rows
        // are diagonal on pivot columns after the full sweep above
        std::vector<FracExpr> x(cols_, FracExpr(sig));
        for (size_t c : pivot_cols) {
            size_t r = pivot_row_of_col[c];
            // row: M[r][c]*x_c + sum over *free* columns + rhs... free are 0
            FracExpr num = FracExpr::of(M[r][cols_]);
            x[c] = num / FracExpr::of(M[r][c]);
        }
        Expr den = Expr::constant(sig, Scalar::one());
        for (size_t c = 0; c < cols_; ++c)
            if (!x[c].den_is_one()) den = den * x[c].den;
        out.denominator = den;
        out.polynomial = den.is_constant();
        out.particular.reserve(cols_);
        for (size_t c = 0; c < cols_; ++c) {
            FracExpr scaled = x[c] * FracExpr(den, Expr::constant(sig, Scalar::one()));
            scaled.simplify();
            out.particular.push_back(scaled.num);
        }
        if (out.polynomial) {
            // denominator is a constant: fold it in
            Scalar d = den.constant_part();
            for (Expr& e : out.particular) e = (Scalar::one() / d) * e;
            out.denominator = Expr::constant(sig, Scalar::one());
        }

        // kernel basis: one vector per free column, denominators cleared
        for (size_t f = 0; f < cols_; ++f) {
            if (pivot_row_of_col[f] != SIZE_MAX) continue;
            std::vector<FracExpr> v(cols_, FracExpr(sig));
            v[f] = FracExpr::of(Expr::constant(sig, Scalar::one()));
            for (size_t c : pivot_cols) {
                size_t r = pivot_row_of_col[c];
                if (M[r][f].is_zero()) continue;
                v[c] = -(FracExpr::of(M[r][f]) / FracExpr::of(M[r][c]));
            }
            Expr clear = Expr::constant(sig, Scalar::one());
            for (size_t c = 0; c < cols_; ++c)
                if (!v[c].den_is_one()) clear = clear * v[c].den;
            std::vector<Expr> vec;
            vec.reserve(cols_);
            for (size_t c = 0; c < cols_; ++c) {
                FracExpr scaled = v[c] * FracExpr(clear, Expr::constant(sig, Scalar::one()));
                scaled.simplify();
                vec.push_back(scaled.num);
            }
            out.kernel.push_back(std::move(vec));
        }
        return out;
    }

  private:
    struct Row {
        std::vector<Expr> a;
        Expr b;
    };
    const Signature* sig_;
    size_t cols_;
    std::vector<Row> rows_;
};

// Sparse linear system over Q(i), kept in incremental reduced row echelon
// form.  Equations read  sum_j a_{rj} x_j + b_r = 0.
class ScalarLinearSystem {
  public:
    void add(size_t row, size_t col, const Scalar& v) {
        if (v.is_zero()) return;
        touch(row);
        rows_[row].a[col] += v;
    }
    void add_rhs(size_t row, const Scalar& v) {
        if (v.is_zero()) return;
        touch(row);
        rows_[row].b += v;
    }
    size_t row_count() const { return rows_.size(); }

    struct Reduced {
        // pivot col -> (free col -> coeff, rhs): x_p = rhs + sum coeff*x_free
        std::map<size_t, std::pair<std::map<size_t, Scalar>, Scalar>> pivots;
        std::vector<size_t> free_cols;
        bool consistent = true;
    };

    Reduced reduce(size_t n_unknowns) const {
        Reduced out;
        // pivot storage: col -> row expressed over non-pivot columns
        std::map<size_t, SRow> piv;
        std::unordered_map<size_t, std::vector<size_t>> col_to_pivots;

        // shortest rows first keeps the elimination near-structural
        std::vector<const SRow*> work;
        work.reserve(rows_.size());
        for (const auto& [r, row] : rows_) work.push_back(&row);
        std::stable_sort(work.begin(), work.end(),
                         [](const SRow* a, const SRow* b) { return a->a.size() < b->a.size(); });

        for (const SRow* src : work) {
            SRow row = *src;
            reduce_row(row, piv);
            if (row.a.empty()) {
                if (!row.b.is_zero()) out.consistent = false;
                continue;
            }
            // normalize on the lowest column
            auto lead = row.a.begin();
            Scalar inv = Scalar::one() / lead->second;
            for (auto& [c, v] : row.a) v = v * inv;
            row.b = row.b * inv;
            size_t pc = lead->first;
            row.a.erase(pc);
            // eliminate pc from existing pivots: substitute
            // x_pc = -sum(row.a)x - row.b into each user row
            auto users = col_to_pivots.find(pc);
            if (users != col_to_pivots.end()) {
                for (size_t upc : users->second) {
                    auto pit = piv.find(upc);
                    if (pit == piv.end()) continue;
                    auto hit = pit->second.a.find(pc);
                    if (hit == pit->second.a.end()) continue;
                    Scalar f = hit->second;
                    pit->second.a.erase(hit);
                    axpy(pit->second, -f, row, upc, col_to_pivots);
                }
                col_to_pivots.erase(users);
            }
            for (const auto& [c, v] : row.a) col_to_pivots[c].push_back(pc);
            piv.emplace(pc, std::move(row));
        }

        std::set<size_t> pivot_cols;
        for (auto& [c, r] : piv) pivot_cols.insert(c);
        for (size_t c = 0; c < n_unknowns; ++c)
            if (!pivot_cols.count(c)) out.free_cols.push_back(c);
        for (auto& [c, r] : piv) {
            std::map<size_t, Scalar> deps;
            for (auto& [fc, v] : r.a) deps[fc] = -v;
            out.pivots[c] = {std::move(deps), -r.b};
        }
        return out;
    }

    // particular solution with free unknowns zero
    bool solve_affine(size_t n_unknowns, std::vector<Scalar>& out) const {
        Reduced red = reduce(n_unknowns);
        if (!red.consistent) return false;
        out.assign(n_unknowns, Scalar::zero());
        for (auto& [c, pr] : red.pivots) out[c] = pr.second;
        return true;
    }

    // basis of the affine solution set direction space (b must be zero for a
    // plain nullspace)
    std::vector<std::vector<Scalar>> nullspace(size_t n_unknowns) const {
        Reduced red = reduce(n_unknowns);
        std::vector<std::vector<Scalar>> basis;
        if (!red.consistent) return basis;
        for (size_t f : red.free_cols) {
            std::vector<Scalar> v(n_unknowns, Scalar::zero());
            v[f] = Scalar::one();
            for (auto& [c, pr] : red.pivots) {
                auto it = pr.first.find(f);
                if (it != pr.first.end()) v[c] = it->second;
            }
            basis.push_back(std::move(v));
        }
        return basis;
    }

  private:
    struct SRow {
        std::map<size_t, Scalar> a;
        Scalar b;
    };
    void touch(size_t row) { rows_.try_emplace(row); }

    // Substitute x_c = -sum(p.a)x - p.b for every pivoted column c.  Pivot
    // rows reference only free columns (reduced echelon invariant), so a
    // single substitution pass suffices.
    static void reduce_row(SRow& row, const std::map<size_t, SRow>& piv) {
        std::vector<std::pair<size_t, Scalar>> hits;
        for (const auto& [c, v] : row.a)
            if (piv.count(c)) hits.emplace_back(c, v);
        for (const auto& [c, f] : hits) {
            row.a.erase(c);
            const SRow& p = piv.at(c);
            for (const auto& [cc, vv] : p.a) {
                auto [jt, fresh] = row.a.emplace(cc, -(f * vv));
                if (!fresh) {
                    jt->second -= f * vv;
                    if (jt->second.is_zero()) row.a.erase(jt);
                }
            }
            row.b -= f * p.b;
        }
        for (auto it = row.a.begin(); it != row.a.end();)
            it = it->second.is_zero() ? row.a.erase(it) : std::next(it);
    }

    static void axpy(SRow& target, const Scalar& f, const SRow& src, size_t target_col,
                     std::unordered_map<size_t, std::vector<size_t>>& col_to_pivots) {
        for (const auto& [c, v] : src.a) {
            auto [it, fresh] = target.a.emplace(c, f * v);
            if (fresh)
                col_to_pivots[c].push_back(target_col);
            else {
                it->second += f * v;
                if (it->second.is_zero()) target.a.erase(it);
            }
        }
        target.b += f * src.b;
    }

    std::map<size_t, SRow> rows_;
};

// all monomials over the given variables with total degree at most max_deg,
// skipping monomials reducible by a generator relation (their canonical form
// is spanned by the others); includes the empty monomial
inline std::vector<Monomial> enumerate_monomials(const Signature& sig, std::vector<VarId> vars,
                                                 int max_deg) {
    std::sort(vars.begin(), vars.end(), [&](VarId a, VarId b) { return sig.var_less(a, b); });
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    std::vector<Monomial> out;
    Monomial cur;
    auto reducible = [&](const Monomial& m) {
        for (const auto& rel : sig.relations())
            if (mono_divides(rel.lhs, m)) return true;
        return false;
    };
    std::function<void(size_t, int)> rec = [&](size_t i, int deg_left) {
        if (i == vars.size()) {
            out.push_back(cur);
            return;
        }
        rec(i + 1, deg_left);
        cur.emplace_back(vars[i], 0);
        for (int e = 1; e <= deg_left; ++e) {
            cur.back().second = e;
            // supermonomials of a reducible monomial stay reducible
            if (reducible(cur)) break;
            rec(i + 1, deg_left - e);
        }
        cur.pop_back();
    };
    rec(0, max_deg);
    return out;
}

} // namespace multiform

#endif
