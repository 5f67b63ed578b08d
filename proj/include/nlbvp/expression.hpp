// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

// Arithmetic mini-grammar for coefficient fields:
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' unary)?
//   atom   := number | 'x' | 'y' | 'pi' | func '(' expr ')' | '(' expr ')'
//   func   := sin | cos | tan | exp | log | sqrt | abs | tanh

#include <cctype>
#include <cmath>
#include <memory>
#include <string>

#include "nlbvp/core.hpp"

namespace nlbvp
{

class Expression
{
public:
  explicit Expression(const std::string &src) : src_(src)
  {
    pos_ = 0;
    root_ = parse_expr();
    skip();
    if (pos_ != src_.size())
    {
      error("unexpected '" + std::string(1, src_[pos_]) + "'");
    }
  }

  double operator()(double x, double y = 0.0) const { return root_->eval(x, y); }

private:
  struct Node
  {
    virtual ~Node() = default;
    virtual double eval(double x, double y) const = 0;
  };
  using Ptr = std::shared_ptr<Node>;

  struct Num : Node
  {
    double v;
    explicit Num(double v_) : v(v_) {}
    double eval(double, double) const override { return v; }
  };
  struct Var : Node
  {
    bool is_y;
    explicit Var(bool y_) : is_y(y_) {}
    double eval(double x, double y) const override { return is_y ? y : x; }
  };
  struct Bin : Node
  {
    char op;
    Ptr a, b;
    Bin(char o, Ptr l, Ptr r) : op(o), a(std::move(l)), b(std::move(r)) {}
    double eval(double x, double y) const override
    {
      const double u = a->eval(x, y), v = b->eval(x, y);
      switch (op)
      {
        case '+': return u + v;
        case '-': return u - v;
        case '*': return u * v;
        case '/': return u / v;
        default: return std::pow(u, v);
      }
    }
  };
  struct Neg : Node
  {
    Ptr a;
    explicit Neg(Ptr p) : a(std::move(p)) {}
    double eval(double x, double y) const override { return -a->eval(x, y); }
  };
  struct Fn : Node
  {
    double (*f)(double);
    Ptr a;
    Fn(double (*fn)(double), Ptr p) : f(fn), a(std::move(p)) {}
    double eval(double x, double y) const override { return f(a->eval(x, y)); }
  };

  [[noreturn]] void error(const std::string &what) const
  {
    fail(ErrorKind::ConfigError, "expression \"" + src_ + "\": " + what);
  }

  void skip()
  {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
    {
      ++pos_;
    }
  }

  bool eat(char c)
  {
    skip();
    if (pos_ < src_.size() && src_[pos_] == c)
    {
      ++pos_;
      return true;
    }
    return false;
  }

  Ptr parse_expr()
  {
    Ptr l = parse_term();
    for (;;)
    {
      if (eat('+'))
        l = std::make_shared<Bin>('+', l, parse_term());
      else if (eat('-'))
        l = std::make_shared<Bin>('-', l, parse_term());
      else
        return l;
    }
  }

  Ptr parse_term()
  {
    Ptr l = parse_unary();
    for (;;)
    {
      if (eat('*'))
        l = std::make_shared<Bin>('*', l, parse_unary());
      else if (eat('/'))
        l = std::make_shared<Bin>('/', l, parse_unary());
      else
        return l;
    }
  }

  Ptr parse_unary()
  {
    if (eat('-'))
      return std::make_shared<Neg>(parse_unary());
    if (eat('+'))
      return parse_unary();
    return parse_power();
  }

  Ptr parse_power()
  {
    Ptr a = parse_atom();
    if (eat('^'))
      return std::make_shared<Bin>('^', a, parse_unary());
    return a;
  }

  Ptr parse_atom()
  {
    skip();
    if (pos_ >= src_.size())
      error("unexpected end of input");
    const char c = src_[pos_];
    if (eat('('))
    {
      Ptr e = parse_expr();
      if (!eat(')'))
        error("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
    {
      std::size_t used = 0;
      double v = 0.0;
      try
      {
        v = std::stod(src_.substr(pos_), &used);
      }
      catch (const std::exception &)
      {
        error("bad number");
      }
      pos_ += used;
      return std::make_shared<Num>(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)))
    {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      const std::string id = src_.substr(start, pos_ - start);
      if (id == "x")
        return std::make_shared<Var>(false);
      if (id == "y")
        return std::make_shared<Var>(true);
      if (id == "pi")
        return std::make_shared<Num>(M_PI);
      double (*fn)(double) = nullptr;
      if (id == "sin") fn = [](double v) { return std::sin(v); };
      else if (id == "cos") fn = [](double v) { return std::cos(v); };
      else if (id == "tan") fn = [](double v) { return std::tan(v); };
      else if (id == "exp") fn = [](double v) { return std::exp(v); };
      else if (id == "log") fn = [](double v) { return std::log(v); };
      else if (id == "sqrt") fn = [](double v) { return std::sqrt(v); };
      else if (id == "abs") fn = [](double v) { return std::abs(v); };
      else if (id == "tanh") fn = [](double v) { return std::tanh(v); };
      else error("unknown identifier '" + id + "'");
      if (!eat('('))
        error("expected '(' after " + id);
      Ptr arg = parse_expr();
      if (!eat(')'))
        error("missing ')'");
      return std::make_shared<Fn>(fn, arg);
    }
    error("unexpected '" + std::string(1, c) + "'");
  }

  std::string src_;
  std::size_t pos_ = 0;
  Ptr root_;
};

}  // namespace nlbvp
