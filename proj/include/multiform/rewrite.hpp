// Oriented, prolongable rewriting modulo the multiform Euler-Lagrange
// equations.  Rules solve one jet variable linearly; prolongations are
// generated on demand and cached.  Termination comes from a strict descent in
// the elimination order (total non-space order, then jet order, then lex).

#ifndef MULTIFORM_REWRITE_HPP
#define MULTIFORM_REWRITE_HPP

#include "form.hpp"

#include <mutex>
#include <tuple>

namespace multiform {

struct NonOrientable : std::runtime_error {
    explicit NonOrientable(const std::string& what) : std::runtime_error(what) {}
};

struct RewriteRule {
    VarId lhs;
    Expr rhs;
};

// elimination order on jet variables; space is direction 1 (the first
// declared direction)
inline std::tuple<int, int, std::vector<uint8_t>, int> elim_key(const Signature& sig, VarId v) {
    const VarInfo& vi = sig.info(v);
    int time_order = 0;
    for (int j = 2; j <= vi.index.n(); ++j) time_order += vi.index.at(j);
    return {time_order, vi.index.order(), vi.index.entries, vi.field};
}
inline bool elim_less(const Signature& sig, VarId a, VarId b) {
    return elim_key(sig, a) < elim_key(sig, b);
}

class RewriteSystem {
  public:
    explicit RewriteSystem(const Signature& sig) : sig_(&sig) {}

    const Signature& sig() const { return *sig_; }
    const std::vector<RewriteRule>& rules() const { return rules_; }
    bool empty() const { return rules_.empty(); }

    void add_rule(VarId lhs, Expr rhs) {
        if (rhs.depends_on(lhs)) throw NonOrientable("rule lhs occurs in rhs");
        for (VarId v : rhs.jet_support())
            if (!elim_less(*sig_, v, lhs))
                throw NonOrientable("rule rhs not smaller than lhs in the elimination order");
        rules_.push_back(RewriteRule{lhs, std::move(rhs)});
    }

    // whether v reduces by a (possibly prolonged) rule; returns the rule
    // index, preferring the rule with the largest lhs
    std::optional<size_t> reducer(VarId v) const {
        const VarInfo& vi = sig_->info(v);
        std::optional<size_t> best;
        for (size_t r = 0; r < rules_.size(); ++r) {
            const VarInfo& li = sig_->info(rules_[r].lhs);
            if (li.field != vi.field) continue;
            if (!vi.index.contains(li.index)) continue;
            if (!best || elim_less(*sig_, rules_[*best].lhs, rules_[r].lhs)) best = r;
        }
        return best;
    }

    // rhs of the rule prolonged so its lhs becomes v; cache fills are
    // idempotent, so concurrent readers are safe behind the lock
    const Expr& prolonged_rhs(size_t rule, VarId v) const {
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto key = std::make_pair(rule, v);
        auto it = cache_->map.find(key);
        if (it != cache_->map.end()) return it->second;
        const VarInfo& vi = sig_->info(v);
        const VarInfo& li = sig_->info(rules_[rule].lhs);
        MultiIndex shift = vi.index.diff(li.index);
        Expr prolonged = rules_[rule].rhs.multi_derivative(shift);
        return cache_->map.emplace(key, std::move(prolonged)).first->second;
    }

    Expr normal_form(const Expr& e) const {
        Expr cur = e;
        for (;;) {
            std::optional<VarId> target;
            std::optional<size_t> rule;
            for (VarId v : expr_vars(cur)) {
                auto r = reducer(v);
                if (!r) continue;
                if (!target || elim_less(*sig_, *target, v)) {
                    target = v;
                    rule = r;
                }
            }
            if (!target) return cur;
            cur = cur.substitute(*target, prolonged_rhs(*rule, *target));
        }
    }

    // reduce delta generators through the rules (delta of a reducible
    // variable becomes delta of its prolonged rhs), then coefficients
    Form normal_form(const Form& w) const {
        Form cur = w;
        for (;;) {
            std::optional<VarId> target;
            std::optional<size_t> rule;
            for (const auto& [k, c] : cur.terms())
                for (VarId v : k.delta) {
                    auto r = reducer(v);
                    if (!r) continue;
                    if (!target || elim_less(*sig_, *target, v)) {
                        target = v;
                        rule = r;
                    }
                }
            if (!target) break;
            const Expr& rhs = prolonged_rhs(*rule, *target);
            Form drhs = delta_expr(rhs);
            Form next(*sig_);
            for (const auto& [k, c] : cur.terms()) {
                auto pos = std::find(k.delta.begin(), k.delta.end(), *target);
                if (pos == k.delta.end()) {
                    next.add(k, c);
                    continue;
                }
                // replace slot p by delta(rhs): sign from moving it to front
                size_t p = static_cast<size_t>(pos - k.delta.begin());
                FormKey rest = k;
                rest.delta.erase(rest.delta.begin() + static_cast<long>(p));
                Form rest_form(*sig_);
                rest_form.add(rest, (p % 2) ? -c : c);
                next += wedge(drhs, rest_form);
            }
            cur = next;
        }
        Form out(*sig_);
        for (const auto& [k, c] : cur.terms()) out.add(k, normal_form(c));
        return out;
    }

    bool is_zero_on_shell(const Expr& e) const { return normal_form(e).is_zero(); }
    bool is_zero_on_shell(const Form& w) const { return normal_form(w).is_zero(); }

    static std::set<VarId> expr_vars(const Expr& e) {
        std::set<VarId> s;
        for (const auto& [m, c] : e.terms())
            for (const auto& [v, k] : m)
                if (e.sig().info(v).kind == VarKind::Jet) s.insert(v);
        return s;
    }

  private:
    struct Cache {
        std::mutex mu;
        std::map<std::pair<size_t, VarId>, Expr> map;
    };
    const Signature* sig_;
    std::vector<RewriteRule> rules_;
    mutable std::unique_ptr<Cache> cache_ = std::make_unique<Cache>();
};

// The elimination-maximal jet variable that occurs linearly with an
// invertible Scalar coefficient and dominates the rest of its equation.
inline std::optional<std::pair<VarId, Scalar>> orientation_var(const Signature& sig,
                                                               const Expr& eq) {
    std::set<VarId> var_set = RewriteSystem::expr_vars(eq);
    std::vector<VarId> vars(var_set.begin(), var_set.end());
    std::sort(vars.begin(), vars.end(), [&](VarId a, VarId b) { return elim_less(sig, b, a); });
    for (VarId v : vars) {
        Monomial mv{{v, 1}};
        Scalar c = eq.coeff(mv);
        if (c.is_zero()) continue;
        Expr rest = eq - c * Expr::var(sig, v);
        if (rest.depends_on(v)) continue;
        bool dominated = true;
        for (VarId w : RewriteSystem::expr_vars(rest))
            if (!elim_less(sig, w, v)) {
                dominated = false;
                break;
            }
        if (!dominated) continue;
        return std::make_pair(v, c);
    }
    return std::nullopt;
}

// Orient a list of equations (each an Expr equal to zero) into rules that
// solve for their leading variables.
inline RewriteSystem orient(const Signature& sig, const std::vector<Expr>& equations) {
    RewriteSystem rs(sig);
    for (const Expr& eq : equations) {
        if (eq.is_zero()) continue;
        auto lead = orientation_var(sig, eq);
        if (!lead)
            throw NonOrientable("no jet variable occurs linearly with an invertible coefficient");
        auto [v, c] = *lead;
        Expr rhs = Scalar(-1L) / c * (eq - c * Expr::var(sig, v));
        rs.add_rule(v, std::move(rhs));
    }
    return rs;
}

} // namespace multiform

#endif
