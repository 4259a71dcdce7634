// SPDX-License-Identifier: Apache-2.0
#include "prefq/mucalc.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "lexer.hpp"

namespace prefq {

using internal::Lexer;
using internal::Tok;

std::int32_t MuFormula::push(MuNode n) {
  nodes_.push_back(n);
  validated_ = false;
  return static_cast<std::int32_t>(nodes_.size()) - 1;
}

std::int32_t MuFormula::add_true() { return push({MuOp::True}); }
std::int32_t MuFormula::add_false() { return push({MuOp::False}); }

std::int32_t MuFormula::add_prop(PropAtom atom) {
  atoms_.push_back(std::move(atom));
  MuNode n{MuOp::Prop};
  n.aux = static_cast<std::int32_t>(atoms_.size()) - 1;
  return push(n);
}

std::int32_t MuFormula::add_not(std::int32_t child) {
  MuNode n{MuOp::Not};
  n.lhs = child;
  return push(n);
}

std::int32_t MuFormula::add_and(std::int32_t l, std::int32_t r) {
  MuNode n{MuOp::And};
  n.lhs = l;
  n.rhs = r;
  return push(n);
}

std::int32_t MuFormula::add_or(std::int32_t l, std::int32_t r) {
  MuNode n{MuOp::Or};
  n.lhs = l;
  n.rhs = r;
  return push(n);
}

std::int32_t MuFormula::add_diamond(StakeholderSet coalition, bool reverse,
                                    std::int32_t child) {
  if (coalition.empty())
    throw SemanticError("modality over an empty coalition");
  coalitions_.push_back(std::move(coalition));
  MuNode n{reverse ? MuOp::DiamRev : MuOp::DiamFwd};
  n.lhs = child;
  n.aux = static_cast<std::int32_t>(coalitions_.size()) - 1;
  return push(n);
}

std::int32_t MuFormula::add_var(std::string name) {
  names_.push_back(std::move(name));
  MuNode n{MuOp::Var};
  n.aux = static_cast<std::int32_t>(names_.size()) - 1;
  return push(n);
}

std::int32_t MuFormula::add_mu(std::string var_name, std::int32_t body) {
  names_.push_back(std::move(var_name));
  MuNode n{MuOp::Mu};
  n.lhs = body;
  n.aux = static_cast<std::int32_t>(names_.size()) - 1;
  return push(n);
}

void MuFormula::set_root(std::int32_t id) {
  root_ = id;
  validated_ = false;
}

const PropAtom& MuFormula::atom_of(std::int32_t id) const {
  return atoms_[static_cast<std::size_t>(node(id).aux)];
}

const StakeholderSet& MuFormula::coalition_of(std::int32_t id) const {
  return coalitions_[static_cast<std::size_t>(node(id).aux)];
}

const std::string& MuFormula::name_of(std::int32_t id) const {
  return names_[static_cast<std::size_t>(node(id).aux)];
}

int MuFormula::binder_count() const {
  int n = 0;
  for (const MuNode& nd : nodes_)
    if (nd.op == MuOp::Mu) ++n;
  return n;
}

int MuFormula::modal_count() const {
  int n = 0;
  for (const MuNode& nd : nodes_)
    if (nd.op == MuOp::DiamFwd || nd.op == MuOp::DiamRev) ++n;
  return n;
}

const std::vector<std::string>& MuFormula::validate() const {
  if (validated_) return diagnostics_;
  diagnostics_.clear();
  binder_.assign(nodes_.size(), -1);
  closed_.assign(nodes_.size(), true);
  if (root_ < 0 || root_ >= node_count()) {
    diagnostics_.push_back("formula has no root");
    validated_ = true;
    return diagnostics_;
  }

  // Free variables per subformula, by name index, kept sorted.
  std::vector<std::vector<std::int32_t>> free(nodes_.size());
  auto merge_free = [](std::vector<std::int32_t> a,
                       const std::vector<std::int32_t>& b) {
    std::vector<std::int32_t> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                   std::back_inserter(out));
    return out;
  };

  // Scope of fixpoint names along the DFS, innermost last.
  std::vector<std::pair<std::string, std::int32_t>> scope;

  // Recursive walk; the arena is a tree so each node is visited once.
  auto walk = [&](auto&& self, std::int32_t id) -> void {
    const MuNode& nd = nodes_[static_cast<std::size_t>(id)];
    switch (nd.op) {
      case MuOp::True:
      case MuOp::False:
      case MuOp::Prop:
        break;
      case MuOp::Not: {
        self(self, nd.lhs);
        free[static_cast<std::size_t>(id)] =
            free[static_cast<std::size_t>(nd.lhs)];
        if (!free[static_cast<std::size_t>(id)].empty())
          diagnostics_.push_back(
              "negation applied to an open subformula (free '" +
              names_[static_cast<std::size_t>(
                  free[static_cast<std::size_t>(id)].front())] +
              "')");
        break;
      }
      case MuOp::And:
      case MuOp::Or: {
        self(self, nd.lhs);
        self(self, nd.rhs);
        free[static_cast<std::size_t>(id)] =
            merge_free(free[static_cast<std::size_t>(nd.lhs)],
                       free[static_cast<std::size_t>(nd.rhs)]);
        break;
      }
      case MuOp::DiamFwd:
      case MuOp::DiamRev: {
        if (coalitions_[static_cast<std::size_t>(nd.aux)].empty())
          diagnostics_.push_back("modality over an empty coalition");
        self(self, nd.lhs);
        free[static_cast<std::size_t>(id)] =
            free[static_cast<std::size_t>(nd.lhs)];
        break;
      }
      case MuOp::Var: {
        const std::string& name = names_[static_cast<std::size_t>(nd.aux)];
        auto it = std::find_if(scope.rbegin(), scope.rend(),
                               [&](const auto& s) { return s.first == name; });
        if (it == scope.rend()) {
          diagnostics_.push_back("unbound fixpoint variable '" + name + "'");
        } else {
          binder_[static_cast<std::size_t>(id)] = it->second;
          free[static_cast<std::size_t>(id)] = {nd.aux};
        }
        break;
      }
      case MuOp::Mu: {
        const std::string& name = names_[static_cast<std::size_t>(nd.aux)];
        scope.emplace_back(name, id);
        self(self, nd.lhs);
        scope.pop_back();
        // Remove every alias of this binder's name from the body's frees:
        // occurrences of the same name were bound here.
        std::vector<std::int32_t> rest;
        for (std::int32_t nm : free[static_cast<std::size_t>(nd.lhs)])
          if (names_[static_cast<std::size_t>(nm)] != name) rest.push_back(nm);
        free[static_cast<std::size_t>(id)] = std::move(rest);
        break;
      }
    }
    closed_[static_cast<std::size_t>(id)] =
        free[static_cast<std::size_t>(id)].empty();
  };
  walk(walk, root_);

  validated_ = true;
  return diagnostics_;
}

std::int32_t MuFormula::binder_of(std::int32_t var_id) const {
  return binder_[static_cast<std::size_t>(var_id)];
}

bool MuFormula::is_closed(std::int32_t id) const {
  return closed_[static_cast<std::size_t>(id)];
}

void MuFormula::ensure_valid() const {
  const auto& diags = validate();
  if (diags.empty()) return;
  std::string msg = "invalid formula:";
  for (const std::string& d : diags) msg += " " + d + ";";
  msg.pop_back();
  throw SemanticError(msg);
}

std::vector<std::string> validate_af(const MuFormula& f) { return f.validate(); }

namespace {

bool equal_rec(const MuFormula& a, std::int32_t ia, const MuFormula& b,
               std::int32_t ib) {
  const MuNode& na = a.node(ia);
  const MuNode& nb = b.node(ib);
  if (na.op != nb.op) return false;
  switch (na.op) {
    case MuOp::True:
    case MuOp::False:
      return true;
    case MuOp::Prop:
      return a.atom_of(ia) == b.atom_of(ib);
    case MuOp::Not:
      return equal_rec(a, na.lhs, b, nb.lhs);
    case MuOp::And:
    case MuOp::Or:
      return equal_rec(a, na.lhs, b, nb.lhs) && equal_rec(a, na.rhs, b, nb.rhs);
    case MuOp::DiamFwd:
    case MuOp::DiamRev:
      return a.coalition_of(ia) == b.coalition_of(ib) &&
             equal_rec(a, na.lhs, b, nb.lhs);
    case MuOp::Var:
      return a.name_of(ia) == b.name_of(ib);
    case MuOp::Mu:
      return a.name_of(ia) == b.name_of(ib) && equal_rec(a, na.lhs, b, nb.lhs);
  }
  return false;
}

}  // namespace

bool structurally_equal(const MuFormula& a, const MuFormula& b) {
  if (a.root() < 0 || b.root() < 0) return a.root() == b.root();
  return equal_rec(a, a.root(), b, b.root());
}

// ---------------------------------------------------------------------------
// Concrete syntax
// ---------------------------------------------------------------------------

namespace {

// Arguments of '~' and modalities print bare only when they are a single
// token; everything else is parenthesized. A bare "r" after a modality would
// read as the reverse marker, so it is parenthesized as well.
bool prints_as_single_token(const MuFormula& f, std::int32_t id) {
  switch (f.node(id).op) {
    case MuOp::True:
    case MuOp::False:
    case MuOp::Var:
      return true;
    case MuOp::Prop:
      return !f.atom_of(id).resolved();
    default:
      return false;
  }
}

std::string single_token_text(const MuFormula& f, std::int32_t id) {
  switch (f.node(id).op) {
    case MuOp::True: return "tt";
    case MuOp::False: return "ff";
    case MuOp::Var: return f.name_of(id);
    default: return f.atom_of(id).value;
  }
}

int mu_precedence(MuOp op) {
  switch (op) {
    case MuOp::Or: return 1;
    case MuOp::And: return 2;
    case MuOp::Not:
    case MuOp::DiamFwd:
    case MuOp::DiamRev:
    case MuOp::Mu:
      return 3;
    default: return 4;
  }
}

void print_rec(const MuFormula& f, std::int32_t id, int parent_prec,
               std::string& out) {
  const MuNode& nd = f.node(id);
  int prec = mu_precedence(nd.op);
  bool parens = prec < parent_prec;
  if (parens) out += '(';
  auto print_arg = [&](std::int32_t child) {
    if (prints_as_single_token(f, child) &&
        single_token_text(f, child) != "r") {
      out += single_token_text(f, child);
    } else {
      out += '(';
      print_rec(f, child, 0, out);
      out += ')';
    }
  };
  switch (nd.op) {
    case MuOp::True: out += "tt"; break;
    case MuOp::False: out += "ff"; break;
    case MuOp::Prop:
      if (f.atom_of(id).resolved()) {
        out += f.atom_of(id).variable;
        out += '=';
      }
      out += f.atom_of(id).value;
      break;
    case MuOp::Not:
      out += '~';
      print_arg(nd.lhs);
      break;
    case MuOp::And:
      print_rec(f, nd.lhs, prec, out);
      out += " & ";
      print_rec(f, nd.rhs, prec + 1, out);
      break;
    case MuOp::Or:
      print_rec(f, nd.lhs, prec, out);
      out += " | ";
      print_rec(f, nd.rhs, prec + 1, out);
      break;
    case MuOp::DiamFwd:
    case MuOp::DiamRev:
      out += '<';
      out += f.coalition_of(id).to_string();
      out += '>';
      if (nd.op == MuOp::DiamRev) out += 'r';
      out += ' ';
      print_arg(nd.lhs);
      break;
    case MuOp::Mu:
      out += "mu ";
      out += f.name_of(id);
      out += " . (";
      print_rec(f, nd.lhs, 0, out);
      out += ')';
      break;
    case MuOp::Var:
      out += f.name_of(id);
      break;
  }
  if (parens) out += ')';
}

class FormulaParser {
 public:
  explicit FormulaParser(const std::string& text) : lex_(text) {}

  MuFormula parse() {
    std::int32_t root = expr();
    lex_.expect_end();
    f_.set_root(root);
    return std::move(f_);
  }

 private:
  std::int32_t expr() {
    std::int32_t l = term();
    while (lex_.accept(Tok::Pipe)) l = f_.add_or(l, term());
    return l;
  }

  std::int32_t term() {
    std::int32_t l = factor();
    while (lex_.accept(Tok::Amp)) l = f_.add_and(l, factor());
    return l;
  }

  std::int32_t factor() {
    SourcePos pos = lex_.pos();
    if (lex_.accept(Tok::Tilde)) return f_.add_not(factor());
    if (lex_.accept(Tok::LParen)) {
      std::int32_t id = expr();
      lex_.expect(Tok::RParen, "')'");
      return id;
    }
    if (lex_.accept(Tok::Lt)) {
      lex_.expect(Tok::LBrace, "'{'");
      std::vector<int> ids;
      do {
        long long id = lex_.expect_int("a stakeholder id");
        if (id <= 0) throw ParseError("stakeholder ids must be positive", pos);
        ids.push_back(static_cast<int>(id));
      } while (lex_.accept(Tok::Comma));
      lex_.expect(Tok::RBrace, "'}'");
      lex_.expect(Tok::Gt, "'>'");
      bool reverse = lex_.is_ident("r");
      if (reverse) lex_.advance();
      return f_.add_diamond(StakeholderSet(std::move(ids)), reverse, factor());
    }
    if (lex_.kind() != Tok::Ident)
      throw ParseError("expected a formula", pos);
    if (lex_.is_ident("tt")) {
      lex_.advance();
      return f_.add_true();
    }
    if (lex_.is_ident("ff")) {
      lex_.advance();
      return f_.add_false();
    }
    if (lex_.is_ident("mu")) {
      lex_.advance();
      std::string name = lex_.expect_ident("a fixpoint variable name");
      lex_.expect(Tok::Dot, "'.'");
      scope_.push_back(name);
      std::int32_t body = factor();
      scope_.pop_back();
      return f_.add_mu(name, body);
    }
    std::string first = lex_.expect_ident("a formula");
    if (lex_.accept(Tok::Eq)) {
      std::string value = lex_.expect_ident("a value name");
      return f_.add_prop(PropAtom{first, value});
    }
    if (std::find(scope_.rbegin(), scope_.rend(), first) != scope_.rend())
      return f_.add_var(first);
    return f_.add_prop(PropAtom{"", first});
  }

  Lexer lex_;
  MuFormula f_;
  std::vector<std::string> scope_;
};

void check_coalitions(const MuFormula& f, const PreferenceGraph& g) {
  for (std::int32_t id = 0; id < f.node_count(); ++id) {
    MuOp op = f.node(id).op;
    if (op != MuOp::DiamFwd && op != MuOp::DiamRev) continue;
    for (int a : f.coalition_of(id))
      if (!g.stakeholders().contains(a))
        throw SemanticError("unknown stakeholder " + std::to_string(a) +
                            " in modality coalition " +
                            f.coalition_of(id).to_string());
  }
}

}  // namespace

std::string print_formula(const MuFormula& f) {
  if (f.root() < 0) throw InternalError("formula has no root");
  std::string out;
  print_rec(f, f.root(), 0, out);
  return out;
}

MuFormula parse_formula(const std::string& text) {
  return FormulaParser(text).parse();
}

// ---------------------------------------------------------------------------
// Global engine
// ---------------------------------------------------------------------------

namespace {

class GlobalEvaluator {
 public:
  GlobalEvaluator(const MuFormula& f, const PreferenceGraph& g,
                  const EngineOptions& opts, GlobalEvalStats* stats)
      : f_(f), g_(g), opts_(opts), stats_(stats) {
    env_.resize(static_cast<std::size_t>(f.node_count()));
    cache_.resize(static_cast<std::size_t>(f.node_count()));
  }

  NodeSet eval(std::int32_t id) {
    bool cacheable = f_.is_closed(id);
    if (cacheable && cache_[static_cast<std::size_t>(id)])
      return *cache_[static_cast<std::size_t>(id)];
    NodeSet result = compute(id);
    if (cacheable) cache_[static_cast<std::size_t>(id)] = result;
    return result;
  }

 private:
  NodeSet compute(std::int32_t id) {
    const MuNode& nd = f_.node(id);
    switch (nd.op) {
      case MuOp::True:
        return g_.full_universe();
      case MuOp::False:
        return g_.empty_set();
      case MuOp::Prop:
        return g_.prop_nodes(f_.atom_of(id), opts_.trace);
      case MuOp::Not: {
        NodeSet s = g_.all_outcomes();
        return s.subtract(eval(nd.lhs));
      }
      case MuOp::And:
        return eval(nd.lhs) & eval(nd.rhs);
      case MuOp::Or:
        return eval(nd.lhs) | eval(nd.rhs);
      case MuOp::DiamFwd:
      case MuOp::DiamRev: {
        // <A> phi holds where a forward step lands in phi, so its extension
        // is the union of reverse neighbourhoods of phi nodes, and dually.
        NodeSet sub = eval(nd.lhs);
        EdgeDir expand =
            nd.op == MuOp::DiamFwd ? EdgeDir::Reverse : EdgeDir::Forward;
        NodeSet out = g_.empty_set();
        sub.for_each([&](NodeId s) {
          opts_.deadline.poll();
          for (NodeId n :
               g_.successors(s, f_.coalition_of(id), expand, opts_.trace))
            out.insert(n);
        });
        return out;
      }
      case MuOp::Var: {
        const auto& bound = env_[static_cast<std::size_t>(f_.binder_of(id))];
        if (!bound) throw InternalError("fixpoint variable outside its binder");
        return *bound;
      }
      case MuOp::Mu: {
        std::uint64_t guard = g_.outcome_count() + 3;
        NodeSet cur = g_.empty_set();
        std::uint64_t iter = 0;
        auto& slot = env_[static_cast<std::size_t>(id)];
        std::optional<NodeSet> saved = slot;  // permit rebinding under shadowing
        for (;;) {
          slot = cur;
          NodeSet next = compute_body(nd.lhs);
          ++iter;
          opts_.deadline.poll();
          if (next == cur) break;
          cur = std::move(next);
          if (iter > guard)
            throw InternalError(
                "fixpoint did not stabilize within the universe bound");
        }
        slot = saved;
        if (stats_) {
          ++stats_->fixpoints_evaluated;
          stats_->total_iterations += iter;
          stats_->max_iterations = std::max(stats_->max_iterations, iter);
        }
        return cur;
      }
    }
    throw InternalError("unhandled formula node");
  }

  // The body depends on the iterating variable, so it bypasses the
  // closed-formula cache at the top level; closed subformulas inside it
  // still hit the cache.
  NodeSet compute_body(std::int32_t id) { return eval(id); }

  const MuFormula& f_;
  const PreferenceGraph& g_;
  EngineOptions opts_;
  GlobalEvalStats* stats_;
  std::vector<std::optional<NodeSet>> env_;    // keyed by Mu node id
  std::vector<std::optional<NodeSet>> cache_;  // closed subformulas
};

}  // namespace

NodeSet eval_global(const MuFormula& f, const PreferenceGraph& g,
                    const EngineOptions& opts, GlobalEvalStats* stats) {
  f.ensure_valid();
  check_coalitions(f, g);
  return GlobalEvaluator(f, g, opts, stats).eval(f.root());
}

// ---------------------------------------------------------------------------
// Local engine
// ---------------------------------------------------------------------------

struct LocalEvaluator::RunState {
  // 1 = in progress, 2 = completed false in this run.
  std::vector<std::unordered_map<NodeId, std::uint8_t>> state;
  // Goals that answered false while still in progress; if one of them later
  // completes true, the run used a stale assumption and must replay.
  std::vector<std::unordered_set<NodeId>> cut_answered;
  bool flipped = false;
};

LocalEvaluator::LocalEvaluator(const MuFormula& f, const PreferenceGraph& g,
                               const EngineOptions& opts)
    : f_(f), g_(g), opts_(opts) {
  f_.ensure_valid();
  check_coalitions(f_, g_);
  resolved_.resize(static_cast<std::size_t>(f.node_count()), {-1, -1});
  mu_index_.resize(static_cast<std::size_t>(f.node_count()), -1);
  std::int32_t mus = 0;
  for (std::int32_t id = 0; id < f.node_count(); ++id) {
    switch (f.node(id).op) {
      case MuOp::Prop:
        resolved_[static_cast<std::size_t>(id)] = g.resolve_atom(f.atom_of(id));
        break;
      case MuOp::Mu:
        if (!f.is_closed(id))
          throw SemanticError(
              "the local engine requires every fixpoint subformula to be "
              "closed");
        mu_index_[static_cast<std::size_t>(id)] = mus++;
        break;
      default:
        break;
    }
  }
  true_memo_.resize(static_cast<std::size_t>(mus));
}

bool LocalEvaluator::eval_at(std::int32_t id, NodeId n, RunState& run) {
  const MuNode& nd = f_.node(id);
  switch (nd.op) {
    case MuOp::True:
      return true;
    case MuOp::False:
      return false;
    case MuOp::Prop: {
      if (opts_.trace) opts_.trace->mark(n);
      if (n == kBottom) return false;
      const auto& [var, val] = resolved_[static_cast<std::size_t>(id)];
      return g_.outcome_value(n, var) == val;
    }
    case MuOp::Not:
      if (n == kBottom) return false;
      return !eval_at(nd.lhs, n, run);
    case MuOp::And:
      return eval_at(nd.lhs, n, run) && eval_at(nd.rhs, n, run);
    case MuOp::Or:
      return eval_at(nd.lhs, n, run) || eval_at(nd.rhs, n, run);
    case MuOp::DiamFwd:
    case MuOp::DiamRev: {
      EdgeDir dir =
          nd.op == MuOp::DiamFwd ? EdgeDir::Forward : EdgeDir::Reverse;
      for (NodeId m :
           g_.successors(n, f_.coalition_of(id), dir, opts_.trace)) {
        opts_.deadline.poll();
        if (eval_at(nd.lhs, m, run)) return true;
      }
      return false;
    }
    case MuOp::Var:
      return goal(f_.binder_of(id), n, run);
    case MuOp::Mu:
      return goal(id, n, run);
  }
  throw InternalError("unhandled formula node");
}

bool LocalEvaluator::goal(std::int32_t mu_id, NodeId n, RunState& run) {
  std::size_t mi =
      static_cast<std::size_t>(mu_index_[static_cast<std::size_t>(mu_id)]);
  auto& memo = true_memo_[mi];
  if (std::binary_search(memo.begin(), memo.end(), n)) return true;
  auto& st = run.state[mi];
  auto it = st.find(n);
  if (it != st.end()) {
    if (it->second == 1) run.cut_answered[mi].insert(n);
    return false;
  }
  st.emplace(n, 1);
  opts_.deadline.poll();
  bool result = eval_at(f_.node(mu_id).lhs, n, run);
  if (result) {
    memo.insert(std::lower_bound(memo.begin(), memo.end(), n), n);
    st.erase(n);
    if (run.cut_answered[mi].count(n)) run.flipped = true;
  } else {
    st[n] = 2;
  }
  return result;
}

bool LocalEvaluator::check(NodeId node) {
  for (;;) {
    std::size_t before = 0;
    for (const auto& memo : true_memo_) before += memo.size();
    RunState run;
    run.state.resize(true_memo_.size());
    run.cut_answered.resize(true_memo_.size());
    bool verdict = eval_at(f_.root(), node, run);
    if (!run.flipped) return verdict;
    // The run consulted a goal as false before proving it true, so some
    // false answers downstream of it are suspect. Replay; the memo grew by
    // at least that goal, which bounds the number of replays.
    std::size_t after = 0;
    for (const auto& memo : true_memo_) after += memo.size();
    if (after <= before)
      throw InternalError("local evaluation replay made no progress");
  }
}

bool eval_local(const MuFormula& f, const PreferenceGraph& g, NodeId node,
                const EngineOptions& opts) {
  return LocalEvaluator(f, g, opts).check(node);
}

}  // namespace prefq
