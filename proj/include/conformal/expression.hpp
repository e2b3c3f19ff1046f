#pragma once

// Minimal arithmetic expressions over named variables, compiled to a postfix
// program. Grammar (version 1):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?          right associative, binds tighter than unary minus
//   primary := number | constant | variable | function '(' expr ')' | '(' expr ')'
//   constant:= 'pi' | 'e'
//   function:= 'exp' | 'ln' | 'abs' | 'sqrt' | 'sin' | 'cos'
//
// Variables are the names passed at compile time (x1..xn for chart
// coordinates, s for arc-length profiles).

#include "conformal/core.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace conformal {

inline constexpr int kExpressionGrammarVersion = 1;

class Expression {
 public:
  Expression() = default;

  /// Throws InputError with the offending position on malformed input.
  static Expression compile(std::string_view source, const std::vector<std::string>& variables);

  /// Convenience: variables x1..x<dim>.
  static Expression compile_coordinates(std::string_view source, int dim);

  double evaluate(const double* values, std::size_t count) const;
  double operator()(const Vecd& x) const { return evaluate(x.data(), static_cast<std::size_t>(x.size())); }
  double operator()(double s) const { return evaluate(&s, 1); }

  const std::string& source() const { return source_; }
  std::size_t variable_count() const { return variable_count_; }
  bool is_constant() const;

 private:
  enum class Op : unsigned char { Push, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Ln, Abs, Sqrt, Sin, Cos };
  struct Instr {
    Op op;
    double value = 0;
    int index = 0;
  };
  friend class ExpressionParser;

  std::string source_;
  std::vector<Instr> program_;
  std::size_t variable_count_ = 0;
  int max_depth_ = 0;
};

}  // namespace conformal
