#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gg {

using Complex = std::complex<double>;
using Point = std::vector<double>;

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t column)
        : std::runtime_error(msg + " at column " + std::to_string(column)), column_(column) {}
    std::size_t column() const { return column_; }

private:
    std::size_t column_;
};

class UnknownVariableError : public std::runtime_error {
public:
    explicit UnknownVariableError(const std::string& name)
        : std::runtime_error("unknown variable '" + name + "'"), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class EvalError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class ChartMismatchError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

class ScalarField;

/// Local coordinate model. `coords` are the bundle directions; `params` are
/// extra variables (e.g. the t of a t-dependent family on a factor) that may
/// appear in expressions but carry no tangent or cotangent slot.
class Chart {
public:
    static std::shared_ptr<const Chart> make(std::string id, std::vector<std::string> coords,
                                             std::vector<Interval> domain,
                                             std::vector<std::string> params = {},
                                             std::vector<Interval> param_domain = {},
                                             const std::vector<std::string>& exclusions = {});

    const std::string& id() const { return id_; }
    std::size_t dim() const { return coords_.size(); }
    std::size_t num_vars() const { return vars_.size(); }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<std::string>& params() const { return params_; }
    const std::vector<std::string>& vars() const { return vars_; }
    const std::vector<Interval>& box() const { return box_; }
    int var_index(std::string_view name) const;

    /// Sample points avoid |f| < 1e-6 for every exclusion predicate.
    std::size_t num_exclusions() const { return exclusions_.size(); }
    const std::vector<std::string>& exclusion_texts() const { return exclusion_texts_; }

private:
    Chart() = default;
    std::string id_;
    std::vector<std::string> coords_;
    std::vector<std::string> params_;
    std::vector<std::string> vars_;
    std::vector<Interval> box_;
    std::vector<std::string> exclusion_texts_;
    std::vector<std::shared_ptr<const struct Node>> exclusions_;

    friend std::vector<Point> sample_points(const Chart&, const struct SamplePlan&);
};

using ChartPtr = std::shared_ptr<const Chart>;

struct SamplePlan {
    std::uint64_t seed = 42;
    int count = 20;
    double tolerance = 1e-9;
};

/// Deterministic in (seed, count, chart).
std::vector<Point> sample_points(const Chart& chart, const SamplePlan& plan);

enum class Op : std::uint8_t { Const, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Sin, Cos, Sinh, Cosh };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op;
    Complex value{};
    int var = -1;
    int exponent = 0;
    NodePtr lhs;
    NodePtr rhs;
};

class ScalarField {
public:
    ScalarField() = default;
    ScalarField(ChartPtr chart, NodePtr node);

    static ScalarField constant(ChartPtr chart, Complex c);
    static ScalarField variable(ChartPtr chart, std::string_view name);
    static ScalarField zero(ChartPtr chart) { return constant(std::move(chart), 0.0); }
    static ScalarField one(ChartPtr chart) { return constant(std::move(chart), 1.0); }

    const ChartPtr& chart() const { return chart_; }
    const NodePtr& node() const { return node_; }
    bool valid() const { return static_cast<bool>(node_); }

    bool is_constant() const { return node_->op == Op::Const; }
    bool is_zero() const { return is_constant() && node_->value == Complex(0.0); }
    bool is_one() const { return is_constant() && node_->value == Complex(1.0); }

    Complex evaluate(std::span<const double> point) const;
    ScalarField differentiate(std::string_view var) const;
    ScalarField differentiate(int var_index) const;

    std::string to_string() const;

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator/(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a);
    friend ScalarField operator*(Complex c, const ScalarField& a);
    friend ScalarField operator*(const ScalarField& a, Complex c) { return c * a; }

    ScalarField& operator+=(const ScalarField& o) { return *this = *this + o; }
    ScalarField& operator-=(const ScalarField& o) { return *this = *this - o; }
    ScalarField& operator*=(const ScalarField& o) { return *this = *this * o; }

private:
    ChartPtr chart_;
    NodePtr node_;
};

ScalarField pow(const ScalarField& f, int exponent);
ScalarField exp(const ScalarField& f);
ScalarField sin(const ScalarField& f);
ScalarField cos(const ScalarField& f);
ScalarField sinh(const ScalarField& f);
ScalarField cosh(const ScalarField& f);

ScalarField parse(std::string_view text, const ChartPtr& chart);
std::string print(const ScalarField& f);
ScalarField differentiate(const ScalarField& f, std::string_view coord);
Complex evaluate(const ScalarField& f, std::span<const double> point);

/// Rebuilds f over `target`, mapping variables by name.
ScalarField remap(const ScalarField& f, const ChartPtr& target);

/// Node count of the DAG (shared subtrees counted once).
std::size_t dag_size(const ScalarField& f);

/// Flattened evaluation program for a batch of fields on one chart. Shared
/// subexpressions are evaluated once per point.
class Tape {
public:
    Tape() = default;
    explicit Tape(const std::vector<ScalarField>& outputs);

    std::size_t size() const { return outputs_.size(); }
    /// Throws EvalError on division by zero. Safe to call concurrently.
    void evaluate(std::span<const double> point, std::vector<Complex>& out) const;
    std::vector<Complex> evaluate(std::span<const double> point) const;

private:
    struct Instr {
        Op op;
        int a = -1;
        int b = -1;
        int exponent = 0;
        int var = -1;
        Complex value{};
    };
    std::vector<Instr> code_;
    std::vector<int> outputs_;
};

}  // namespace gg
