#include "hcspb/eval.hpp"

#include <cmath>

namespace hcspb {

double eval_expr(const State& sigma, const Expr& e) {
  return std::visit(
      [&](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Const>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, Var>) {
          return sigma.get(x.name);
        } else {
          switch (x.fn) {
            case Fn::add: return eval_expr(sigma, x.args[0]) + eval_expr(sigma, x.args[1]);
            case Fn::sub: return eval_expr(sigma, x.args[0]) - eval_expr(sigma, x.args[1]);
            case Fn::mul: return eval_expr(sigma, x.args[0]) * eval_expr(sigma, x.args[1]);
            case Fn::div: {
              double d = eval_expr(sigma, x.args[1]);
              if (d == 0.0) fail(Errc::division_by_zero, "division by zero");
              return eval_expr(sigma, x.args[0]) / d;
            }
            case Fn::neg: return -eval_expr(sigma, x.args[0]);
          }
          fail(Errc::unsupported_construct, "unknown operator");
        }
      },
      e.node);
}

namespace {

State rec_list(const std::vector<Binder>& subs, State sigma) {
  for (const auto& b : subs) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, BInput> || std::is_same_v<T, BOutput>) {
            sigma = sigma.with(x.ack, 0.0);
          } else if constexpr (std::is_same_v<T, BCompound>) {
            sigma = rec_list(x.subs, std::move(sigma));
          }
        },
        b.node);
  }
  return sigma;
}

}  // namespace

State rec_binders(const std::vector<Binder>& subs, const State& sigma) {
  return rec_list(subs, sigma);
}

State rec_binder(const Binder& b, const State& sigma) { return rec_list({b}, sigma); }

bool cmp_holds(double lhs, CmpOp op, double rhs, double eps) {
  switch (op) {
    case CmpOp::lt: return lhs < rhs + eps;
    case CmpOp::le: return lhs <= rhs + eps;
    case CmpOp::eq: return std::fabs(lhs - rhs) <= eps;
    case CmpOp::ge: return lhs >= rhs - eps;
    case CmpOp::gt: return lhs > rhs - eps;
  }
  return false;
}

bool fol_eval(const State& sigma, const Formula& f, double eps) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, TrueF>) {
          return true;
        } else if constexpr (std::is_same_v<T, FalseF>) {
          return false;
        } else if constexpr (std::is_same_v<T, Cmp>) {
          return cmp_holds(eval_expr(sigma, x.lhs), x.op, eval_expr(sigma, x.rhs), eps);
        } else if constexpr (std::is_same_v<T, Not>) {
          return !fol_eval(sigma, *x.body, eps);
        } else if constexpr (std::is_same_v<T, And>) {
          for (const auto& p : x.parts)
            if (!fol_eval(sigma, p, eps)) return false;
          return true;
        } else if constexpr (std::is_same_v<T, Or>) {
          for (const auto& p : x.parts)
            if (fol_eval(sigma, p, eps)) return true;
          return false;
        } else if constexpr (std::is_same_v<T, Implies>) {
          return !fol_eval(sigma, *x.lhs, eps) || fol_eval(sigma, *x.rhs, eps);
        } else {
          fail(Errc::quantifier_not_ground,
               "quantified formula cannot be evaluated on a single state");
        }
      },
      f.node);
}

}  // namespace hcspb
