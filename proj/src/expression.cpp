#include "conformal/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

namespace conformal {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view src, const std::vector<std::string>& vars, Expression& out)
      : src_(src), vars_(vars), out_(out) {}

  void run() {
    parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected trailing input");
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& msg) const {
    throw InputError("expression '" + std::string(src_) + "': " + msg + " at position " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void emit(Op op, double value = 0, int index = 0) {
    out_.program_.push_back({op, value, index});
    switch (op) {
      case Op::Push:
      case Op::Var:
        ++depth_;
        break;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div:
      case Op::Pow:
        --depth_;
        break;
      default:
        break;
    }
    out_.max_depth_ = std::max(out_.max_depth_, depth_);
  }

  void parse_expr() {
    parse_term();
    for (;;) {
      if (accept('+')) {
        parse_term();
        emit(Op::Add);
      } else if (accept('-')) {
        parse_term();
        emit(Op::Sub);
      } else {
        return;
      }
    }
  }

  void parse_term() {
    parse_unary();
    for (;;) {
      if (accept('*')) {
        parse_unary();
        emit(Op::Mul);
      } else if (accept('/')) {
        parse_unary();
        emit(Op::Div);
      } else {
        return;
      }
    }
  }

  void parse_unary() {
    if (accept('-')) {
      parse_unary();
      emit(Op::Neg);
      return;
    }
    if (accept('+')) {
      parse_unary();
      return;
    }
    parse_power();
  }

  void parse_power() {
    parse_primary();
    if (accept('^')) {
      parse_unary();
      emit(Op::Pow);
    }
  }

  void parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (accept('(')) {
      parse_expr();
      if (!accept(')')) fail("expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(src_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      emit(Op::Push, v);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        ++pos_;
      const std::string name(src_.substr(start, pos_ - start));
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) {
          emit(Op::Var, 0, static_cast<int>(i));
          return;
        }
      if (name == "pi") return emit(Op::Push, std::numbers::pi);
      if (name == "e") return emit(Op::Push, std::numbers::e);
      Op fn;
      if (name == "exp")
        fn = Op::Exp;
      else if (name == "ln")
        fn = Op::Ln;
      else if (name == "abs")
        fn = Op::Abs;
      else if (name == "sqrt")
        fn = Op::Sqrt;
      else if (name == "sin")
        fn = Op::Sin;
      else if (name == "cos")
        fn = Op::Cos;
      else {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!accept('(')) fail("expected '(' after " + name);
      parse_expr();
      if (!accept(')')) fail("expected ')'");
      emit(fn);
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  const std::vector<std::string>& vars_;
  Expression& out_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

Expression Expression::compile(std::string_view source, const std::vector<std::string>& variables) {
  Expression e;
  e.source_ = std::string(source);
  e.variable_count_ = variables.size();
  ExpressionParser(source, variables, e).run();
  return e;
}

Expression Expression::compile_coordinates(std::string_view source, int dim) {
  std::vector<std::string> vars;
  for (int i = 1; i <= dim; ++i) vars.push_back("x" + std::to_string(i));
  return compile(source, vars);
}

bool Expression::is_constant() const {
  for (const auto& in : program_)
    if (in.op == Op::Var) return false;
  return true;
}

double Expression::evaluate(const double* values, std::size_t count) const {
  if (count < variable_count_) throw InputError("expression '" + source_ + "': too few variable values");
  constexpr int kInline = 32;
  double inline_stack[kInline] = {};
  std::vector<double> heap;
  double* st = inline_stack;
  if (max_depth_ > kInline) {
    heap.resize(static_cast<std::size_t>(max_depth_));
    st = heap.data();
  }
  int top = -1;
  for (const auto& in : program_) {
    switch (in.op) {
      case Op::Push:
        st[++top] = in.value;
        break;
      case Op::Var:
        st[++top] = values[in.index];
        break;
      case Op::Add:
        st[top - 1] += st[top];
        --top;
        break;
      case Op::Sub:
        st[top - 1] -= st[top];
        --top;
        break;
      case Op::Mul:
        st[top - 1] *= st[top];
        --top;
        break;
      case Op::Div:
        st[top - 1] /= st[top];
        --top;
        break;
      case Op::Pow: {
        const double b = st[top - 1], x = st[top];
        st[top - 1] = x == 2.0 ? b * b : std::pow(b, x);
        --top;
        break;
      }
      case Op::Neg:
        st[top] = -st[top];
        break;
      case Op::Exp:
        st[top] = std::exp(st[top]);
        break;
      case Op::Ln:
        st[top] = std::log(st[top]);
        break;
      case Op::Abs:
        st[top] = std::abs(st[top]);
        break;
      case Op::Sqrt:
        st[top] = std::sqrt(st[top]);
        break;
      case Op::Sin:
        st[top] = std::sin(st[top]);
        break;
      case Op::Cos:
        st[top] = std::cos(st[top]);
        break;
    }
  }
  return st[0];
}

}  // namespace conformal
