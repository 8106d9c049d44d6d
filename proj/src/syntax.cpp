#include "hcspb/syntax.hpp"

#include <algorithm>

namespace hcspb {

namespace {

void mv_collect(const Binder& b, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BInput>) {
          out.push_back(x.var);
          out.push_back(x.ack);
        } else if constexpr (std::is_same_v<T, BOutput>) {
          out.push_back(x.ack);
        } else if constexpr (std::is_same_v<T, BCompound>) {
          for (const auto& sub : x.subs) mv_collect(sub, out);
        }
      },
      b.node);
}

Formula quality_to_formula(const QualityPredicate& q, const std::vector<Formula>& atoms) {
  return std::visit(
      [&](const auto& x) -> Formula {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, QAtom>) {
          if (x.index < 0 || x.index >= static_cast<int>(atoms.size()))
            fail(Errc::unsupported_construct, "quality predicate atom index out of range");
          return atoms[static_cast<size_t>(x.index)];
        } else if constexpr (std::is_same_v<T, QAnd>) {
          std::vector<Formula> parts;
          for (const auto& p : x.parts) parts.push_back(quality_to_formula(p, atoms));
          return f_and(std::move(parts));
        } else if constexpr (std::is_same_v<T, QOr>) {
          std::vector<Formula> parts;
          for (const auto& p : x.parts) parts.push_back(quality_to_formula(p, atoms));
          return f_or(std::move(parts));
        } else if constexpr (std::is_same_v<T, QExists>) {
          return f_or(std::vector<Formula>(atoms));
        } else {
          return f_and(std::vector<Formula>(atoms));
        }
      },
      q.node);
}

bool quality_truth(const QualityPredicate& q, const std::vector<char>& atoms) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, QAtom>) {
          if (x.index < 0 || x.index >= static_cast<int>(atoms.size()))
            fail(Errc::unsupported_construct, "quality predicate atom index out of range");
          return atoms[static_cast<size_t>(x.index)] != 0;
        } else if constexpr (std::is_same_v<T, QAnd>) {
          for (const auto& p : x.parts)
            if (!quality_truth(p, atoms)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, QOr>) {
          for (const auto& p : x.parts)
            if (quality_truth(p, atoms)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, QExists>) {
          return std::any_of(atoms.begin(), atoms.end(), [](char c) { return c != 0; });
        } else {
          return std::all_of(atoms.begin(), atoms.end(), [](char c) { return c != 0; });
        }
      },
      q.node);
}

}  // namespace

std::vector<std::string> mv(const Binder& b) {
  std::vector<std::string> out;
  mv_collect(b, out);
  std::vector<std::string> dedup;
  for (auto& name : out)
    if (std::find(dedup.begin(), dedup.end(), name) == dedup.end()) dedup.push_back(name);
  return dedup;
}

std::set<std::string> mv_set(const Binder& b) {
  auto v = mv(b);
  return std::set<std::string>(v.begin(), v.end());
}

Formula ack_type(const Binder& b) {
  return std::visit(
      [&](const auto& x) -> Formula {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BInput>) {
          return f_eq(var(x.ack), num(1));
        } else if constexpr (std::is_same_v<T, BOutput>) {
          return f_eq(var(x.ack), num(1));
        } else if constexpr (std::is_same_v<T, BCompound>) {
          std::vector<Formula> atoms;
          for (const auto& sub : x.subs) atoms.push_back(ack_type(sub));
          return quality_to_formula(x.pred, atoms);
        } else {
          fail(Errc::done_in_type, "acknowledgement typing is defined on source binders only");
        }
      },
      b.node);
}

bool quality_eval(const QualityPredicate& q, const std::vector<Binder>& subs) {
  std::vector<char> atoms;
  atoms.reserve(subs.size());
  for (const auto& sub : subs) atoms.push_back(binder_complete(sub) ? 1 : 0);
  return quality_truth(q, atoms);
}

bool binder_complete(const Binder& b) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BDone>) {
          return true;
        } else if constexpr (std::is_same_v<T, BCompound>) {
          return quality_eval(x.pred, x.subs);
        } else {
          return false;
        }
      },
      b.node);
}

bool binder_contains_done(const Binder& b) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BDone>) {
          return true;
        } else if constexpr (std::is_same_v<T, BCompound>) {
          return std::any_of(x.subs.begin(), x.subs.end(), binder_contains_done);
        } else {
          return false;
        }
      },
      b.node);
}

QualityPredicate normalize_quality(const QualityPredicate& q, int arity) {
  return std::visit(
      [&](const auto& x) -> QualityPredicate {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, QExists>) {
          std::vector<QualityPredicate> atoms;
          for (int i = 0; i < arity; ++i) atoms.push_back(q_atom(i));
          return q_or(std::move(atoms));
        } else if constexpr (std::is_same_v<T, QForall>) {
          std::vector<QualityPredicate> atoms;
          for (int i = 0; i < arity; ++i) atoms.push_back(q_atom(i));
          return q_and(std::move(atoms));
        } else if constexpr (std::is_same_v<T, QAnd>) {
          std::vector<QualityPredicate> parts;
          for (const auto& p : x.parts) parts.push_back(normalize_quality(p, arity));
          return q_and(std::move(parts));
        } else if constexpr (std::is_same_v<T, QOr>) {
          std::vector<QualityPredicate> parts;
          for (const auto& p : x.parts) parts.push_back(normalize_quality(p, arity));
          return q_or(std::move(parts));
        } else {
          return q;
        }
      },
      q.node);
}

Binder normalize_binder(const Binder& b) {
  Binder out = b;
  if (auto* comp = std::get_if<BCompound>(&out.node)) {
    BCompound fresh;
    fresh.pred = normalize_quality(comp->pred, static_cast<int>(comp->subs.size()));
    for (const auto& sub : comp->subs) fresh.subs.push_back(normalize_binder(sub));
    out.node = std::move(fresh);
  }
  return out;
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Var>) {
          out.insert(x.name);
        } else if constexpr (std::is_same_v<T, Apply>) {
          for (const auto& a : x.args) collect_vars(a, out);
        }
      },
      e.node);
}

namespace {

void collect_free(const Formula& f, std::set<std::string> bound, std::set<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Cmp>) {
          std::set<std::string> vs;
          collect_vars(x.lhs, vs);
          collect_vars(x.rhs, vs);
          for (const auto& v : vs)
            if (!bound.count(v)) out.insert(v);
        } else if constexpr (std::is_same_v<T, Not>) {
          collect_free(*x.body, bound, out);
        } else if constexpr (std::is_same_v<T, And> || std::is_same_v<T, Or>) {
          for (const auto& p : x.parts) collect_free(p, bound, out);
        } else if constexpr (std::is_same_v<T, Implies>) {
          collect_free(*x.lhs, bound, out);
          collect_free(*x.rhs, bound, out);
        } else if constexpr (std::is_same_v<T, Exists> || std::is_same_v<T, Forall>) {
          auto inner = bound;
          inner.insert(x.vars.begin(), x.vars.end());
          collect_free(*x.body, inner, out);
        }
      },
      f.node);
}

}  // namespace

void collect_vars(const Formula& f, std::set<std::string>& out) { collect_free(f, {}, out); }

std::set<std::string> vars_of(const Expr& e) {
  std::set<std::string> out;
  collect_vars(e, out);
  return out;
}

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  collect_vars(f, out);
  return out;
}

std::set<std::string> free_vars(const Binder& b) {
  std::set<std::string> out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BInput>) {
          out.insert(x.var);
          out.insert(x.ack);
        } else if constexpr (std::is_same_v<T, BOutput>) {
          collect_vars(x.value, out);
          out.insert(x.ack);
        } else if constexpr (std::is_same_v<T, BCompound>) {
          for (const auto& sub : x.subs) {
            auto s = free_vars(sub);
            out.insert(s.begin(), s.end());
          }
        }
      },
      b.node);
  return out;
}

std::set<std::string> free_vars(const Process& p) {
  std::set<std::string> out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Assign>) {
          out.insert(x.var);
          collect_vars(x.value, out);
        } else if constexpr (std::is_same_v<T, NondetAssign>) {
          out.insert(x.var);
          collect_vars(x.lo, out);
          collect_vars(x.hi, out);
        } else if constexpr (std::is_same_v<T, Bind>) {
          out = free_vars(x.binder);
        } else if constexpr (std::is_same_v<T, Continuous>) {
          for (const auto& ode : x.odes) {
            out.insert(ode.var);
            collect_vars(ode.rhs, out);
          }
          collect_vars(x.domain, out);
          if (x.invariant) collect_vars(*x.invariant, out);
        } else if constexpr (std::is_same_v<T, Interrupt>) {
          Process c{x.cont, {}, {}};
          out = free_vars(c);
          auto s = free_vars(x.binder);
          out.insert(s.begin(), s.end());
          s = free_vars(*x.handler);
          out.insert(s.begin(), s.end());
        } else if constexpr (std::is_same_v<T, Parallel>) {
          out = free_vars(*x.left);
          auto s = free_vars(*x.right);
          out.insert(s.begin(), s.end());
        } else if constexpr (std::is_same_v<T, Seq>) {
          out = free_vars(*x.first);
          auto s = free_vars(*x.second);
          out.insert(s.begin(), s.end());
        } else if constexpr (std::is_same_v<T, Guard>) {
          collect_vars(x.cond, out);
          auto s = free_vars(*x.body);
          out.insert(s.begin(), s.end());
        } else if constexpr (std::is_same_v<T, Star>) {
          out = free_vars(*x.body);
          if (x.invariant) collect_vars(x.invariant->inv, out);
        } else if constexpr (std::is_same_v<T, Cut>) {
          collect_vars(x.target, out);
        }
      },
      p.node);
  return out;
}

std::set<std::string> ack_vars(const Binder& b) {
  std::set<std::string> out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BInput> || std::is_same_v<T, BOutput>) {
          out.insert(x.ack);
        } else if constexpr (std::is_same_v<T, BCompound>) {
          for (const auto& sub : x.subs) {
            auto s = ack_vars(sub);
            out.insert(s.begin(), s.end());
          }
        }
      },
      b.node);
  return out;
}

std::set<std::string> ack_vars(const Process& p) {
  std::set<std::string> out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Bind>) {
          out = ack_vars(x.binder);
        } else if constexpr (std::is_same_v<T, Interrupt>) {
          out = ack_vars(x.binder);
          auto s = ack_vars(*x.handler);
          out.insert(s.begin(), s.end());
        } else if constexpr (std::is_same_v<T, Parallel>) {
          out = ack_vars(*x.left);
          auto s = ack_vars(*x.right);
          out.insert(s.begin(), s.end());
        } else if constexpr (std::is_same_v<T, Seq>) {
          out = ack_vars(*x.first);
          auto s = ack_vars(*x.second);
          out.insert(s.begin(), s.end());
        } else if constexpr (std::is_same_v<T, Guard>) {
          out = ack_vars(*x.body);
        } else if constexpr (std::is_same_v<T, Star>) {
          out = ack_vars(*x.body);
        }
      },
      p.node);
  return out;
}

std::set<ChanDir> channel_dirs(const Binder& b) {
  std::set<ChanDir> out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BInput>) {
          out.insert({x.chan, false});
        } else if constexpr (std::is_same_v<T, BOutput>) {
          out.insert({x.chan, true});
        } else if constexpr (std::is_same_v<T, BCompound>) {
          for (const auto& sub : x.subs) {
            auto s = channel_dirs(sub);
            out.insert(s.begin(), s.end());
          }
        }
      },
      b.node);
  return out;
}

std::set<ChanDir> channel_dirs(const Process& p) {
  std::set<ChanDir> out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Bind>) {
          out = channel_dirs(x.binder);
        } else if constexpr (std::is_same_v<T, Interrupt>) {
          out = channel_dirs(x.binder);
          auto s = channel_dirs(*x.handler);
          out.insert(s.begin(), s.end());
        } else if constexpr (std::is_same_v<T, Parallel>) {
          out = channel_dirs(*x.left);
          auto s = channel_dirs(*x.right);
          out.insert(s.begin(), s.end());
        } else if constexpr (std::is_same_v<T, Seq>) {
          out = channel_dirs(*x.first);
          auto s = channel_dirs(*x.second);
          out.insert(s.begin(), s.end());
        } else if constexpr (std::is_same_v<T, Guard>) {
          out = channel_dirs(*x.body);
        } else if constexpr (std::is_same_v<T, Star>) {
          out = channel_dirs(*x.body);
        }
      },
      p.node);
  return out;
}

std::set<std::string> channels_of(const Process& p) {
  std::set<std::string> out;
  for (const auto& [chan, dir] : channel_dirs(p)) out.insert(chan);
  return out;
}

void validate_parallel(const Process& left, const Process& right) {
  auto lv = free_vars(left);
  auto rv = free_vars(right);
  for (const auto& v : lv)
    if (rv.count(v))
      fail(Errc::shared_var_in_parallel, "parallel branches share variable '" + v + "'");
  auto lc = channel_dirs(left);
  auto rc = channel_dirs(right);
  for (const auto& cd : lc)
    if (rc.count(cd))
      fail(Errc::shared_var_in_parallel,
           "parallel branches share channel direction '" + cd.first +
               (cd.second ? "!" : "?") + "'");
}

Process p_parallel(Process left, Process right) {
  validate_parallel(left, right);
  return Process{Parallel{boxed<Process>(std::move(left)), boxed<Process>(std::move(right))},
                 {},
                 {}};
}

namespace {

void labels_of_binder(const Binder& b, std::vector<int>& out) {
  if (b.label_before) out.push_back(*b.label_before);
  if (b.label_after) out.push_back(*b.label_after);
  if (const auto* comp = std::get_if<BCompound>(&b.node))
    for (const auto& sub : comp->subs) labels_of_binder(sub, out);
}

void labels_of(const Process& p, std::vector<int>& out) {
  if (p.label_before) out.push_back(*p.label_before);
  if (p.label_after) out.push_back(*p.label_after);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Bind>) {
          labels_of_binder(x.binder, out);
        } else if constexpr (std::is_same_v<T, Interrupt>) {
          labels_of_binder(x.binder, out);
          labels_of(*x.handler, out);
        } else if constexpr (std::is_same_v<T, Parallel>) {
          labels_of(*x.left, out);
          labels_of(*x.right, out);
        } else if constexpr (std::is_same_v<T, Seq>) {
          labels_of(*x.first, out);
          labels_of(*x.second, out);
        } else if constexpr (std::is_same_v<T, Guard>) {
          labels_of(*x.body, out);
        } else if constexpr (std::is_same_v<T, Star>) {
          labels_of(*x.body, out);
        }
      },
      p.node);
}

}  // namespace

std::vector<int> collect_labels(const Process& p) {
  std::vector<int> out;
  labels_of(p, out);
  return out;
}

bool contains_label(const Process& p, int label) {
  auto ls = collect_labels(p);
  return std::find(ls.begin(), ls.end(), label) != ls.end();
}

}  // namespace hcspb
