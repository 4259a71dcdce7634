// SPDX-License-Identifier: Apache-2.0
#include "prefq/translate.hpp"

namespace prefq {

namespace {

class Translator {
 public:
  explicit Translator(SemanticsMode mode) : mode_(mode) {}

  Translation run(const Query& q) {
    Translation out;
    std::int32_t root = tr(q, out.formula);
    out.formula.set_root(root);
    out.fresh_variable_counter = next_var_;
    out.stats.node_count = out.formula.node_count();
    out.stats.binder_count = out.formula.binder_count();
    out.stats.modal_count = out.formula.modal_count();
    return out;
  }

 private:
  // mu Zk . (<who>[r] tr(psi2) | <who>[r] Zk), fresh Zk, own copy of psi2.
  std::int32_t reach_mu(const Query& psi2, const StakeholderSet& who,
                        bool reverse, MuFormula& f) {
    std::string name = "Z" + std::to_string(next_var_++);
    std::int32_t base = f.add_diamond(who, reverse, tr(psi2, f));
    std::int32_t step = f.add_diamond(who, reverse, f.add_var(name));
    return f.add_mu(name, f.add_or(base, step));
  }

  std::int32_t tr_pref(const Query& q, MuFormula& f) {
    const Query& psi2 = *q.rhs;
    const StakeholderSet& all = q.coalition;
    std::int32_t acc = tr(*q.lhs, f);
    switch (mode_) {
      case SemanticsMode::Consensus:
        for (int a : all) {
          StakeholderSet one = StakeholderSet::single(a);
          std::int32_t wit = reach_mu(psi2, one, true, f);
          std::int32_t dom = f.add_not(reach_mu(psi2, one, false, f));
          acc = f.add_and(acc, f.add_and(wit, dom));
        }
        return acc;
      case SemanticsMode::W1A2:
      case SemanticsMode::W1A1: {
        std::int32_t wit = -1;
        for (int a : all) {
          std::int32_t m = reach_mu(psi2, StakeholderSet::single(a), true, f);
          wit = wit < 0 ? m : f.add_or(wit, m);
        }
        acc = f.add_and(acc, wit);
        if (mode_ == SemanticsMode::W1A2) {
          return f.add_and(acc, f.add_not(reach_mu(psi2, all, false, f)));
        }
        for (int a : all)
          acc = f.add_and(
              acc,
              f.add_not(reach_mu(psi2, StakeholderSet::single(a), false, f)));
        return acc;
      }
      case SemanticsMode::W2A2:
      case SemanticsMode::W2A1: {
        acc = f.add_and(acc, reach_mu(psi2, all, true, f));
        if (mode_ == SemanticsMode::W2A2) {
          return f.add_and(acc, f.add_not(reach_mu(psi2, all, false, f)));
        }
        for (int a : all)
          acc = f.add_and(
              acc,
              f.add_not(reach_mu(psi2, StakeholderSet::single(a), false, f)));
        return acc;
      }
    }
    throw InternalError("unhandled semantics mode");
  }

  std::int32_t tr(const Query& q, MuFormula& f) {
    switch (q.kind) {
      case Query::Kind::True:
        return f.add_true();
      case Query::Kind::False:
        return f.add_false();
      case Query::Kind::Prop:
        return f.add_prop(q.prop);
      case Query::Kind::Not:
        return f.add_not(tr(*q.lhs, f));
      case Query::Kind::And:
        return f.add_and(tr(*q.lhs, f), tr(*q.rhs, f));
      case Query::Kind::Or:
        return f.add_or(tr(*q.lhs, f), tr(*q.rhs, f));
      case Query::Kind::Pref:
        return tr_pref(q, f);
    }
    throw InternalError("unhandled query node");
  }

  SemanticsMode mode_;
  int next_var_ = 0;
};

}  // namespace

Translation translate(const Query& q, SemanticsMode mode) {
  return Translator(mode).run(q);
}

}  // namespace prefq
