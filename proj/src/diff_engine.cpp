/*
 * Copyright 2026 The pipinn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pipinn/diff_engine.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace pipinn::diff {

using RowMajorMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstRowMajorMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

std::size_t ParamLayout::add(std::string name, std::size_t rows, std::size_t cols) {
  for (const auto& b : blocks_)
    if (b.name == name) throw DomainError("duplicate parameter block '" + name + "'");
  const std::size_t offset = size_;
  blocks_.push_back({std::move(name), offset, rows, cols});
  size_ += rows * cols;
  return offset;
}

const ParamBlock& ParamLayout::find(const std::string& name) const {
  for (const auto& b : blocks_)
    if (b.name == name) return b;
  throw DomainError("no parameter block named '" + name + "'");
}

bool ParamLayout::is_bijective() const {
  std::size_t cursor = 0;
  std::unordered_set<std::string> names;
  for (const auto& b : blocks_) {
    if (b.offset != cursor || !names.insert(b.name).second) return false;
    cursor += b.size();
  }
  return cursor == size_;
}

bool operator==(const ParamLayout& a, const ParamLayout& b) {
  if (a.size_ != b.size_ || a.blocks_.size() != b.blocks_.size()) return false;
  for (std::size_t i = 0; i < a.blocks_.size(); ++i) {
    const auto& x = a.blocks_[i];
    const auto& y = b.blocks_[i];
    if (x.name != y.name || x.offset != y.offset || x.rows != y.rows || x.cols != y.cols) return false;
  }
  return true;
}

RowMajorMap ParamVector::block(const std::string& name) {
  const auto& b = layout.find(name);
  return RowMajorMap(values.data() + b.offset, static_cast<Eigen::Index>(b.rows), static_cast<Eigen::Index>(b.cols));
}

ConstRowMajorMap ParamVector::block(const std::string& name) const {
  const auto& b = layout.find(name);
  return ConstRowMajorMap(values.data() + b.offset, static_cast<Eigen::Index>(b.rows), static_cast<Eigen::Index>(b.cols));
}

// ---------------------------------------------------------------------------
// Graph construction

NodeId ScalarField::push(Node node) {
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

void ScalarField::check(NodeId id) const {
  if (id >= nodes_.size()) throw DomainError("unknown node id " + std::to_string(id));
}

NodeId ScalarField::input(std::vector<std::size_t> coords) {
  if (coords.empty()) throw DomainError("input node needs at least one coordinate");
  for (auto c : coords)
    if (c >= arity_) throw DomainError("input coordinate " + std::to_string(c) + " exceeds field arity");
  Node n;
  n.op = Op::input;
  n.dim = coords.size();
  n.coords = std::move(coords);
  return push(std::move(n));
}

NodeId ScalarField::constant(Vector values) {
  Node n;
  n.op = Op::constant;
  n.dim = static_cast<std::size_t>(values.size());
  n.offset = std::move(values);
  return push(std::move(n));
}

NodeId ScalarField::affine(NodeId x, Matrix matrix, Vector offset) {
  check(x);
  if (static_cast<std::size_t>(matrix.cols()) != nodes_[x].dim || matrix.rows() != offset.size())
    throw DomainError("affine map shape mismatch");
  Node n;
  n.op = Op::affine;
  n.a = x;
  n.dim = static_cast<std::size_t>(matrix.rows());
  n.matrix = std::move(matrix);
  n.offset = std::move(offset);
  return push(std::move(n));
}

NodeId ScalarField::param_affine(NodeId x, std::size_t out_dim, std::size_t param_offset) {
  check(x);
  if (out_dim == 0) throw DomainError("param_affine output dimension must be >= 1");
  Node n;
  n.op = Op::param_affine;
  n.a = x;
  n.dim = out_dim;
  n.param_offset = param_offset;
  param_extent_ = std::max(param_extent_, param_offset + out_dim * nodes_[x].dim + out_dim);
  return push(std::move(n));
}

NodeId ScalarField::tanh(NodeId x) {
  check(x);
  Node n;
  n.op = Op::tanh;
  n.a = x;
  n.dim = nodes_[x].dim;
  return push(std::move(n));
}

NodeId ScalarField::sine(NodeId x) {
  check(x);
  Node n;
  n.op = Op::sine;
  n.a = x;
  n.dim = nodes_[x].dim;
  return push(std::move(n));
}

NodeId ScalarField::sqrt(NodeId x) {
  check(x);
  Node n;
  n.op = Op::sqrt;
  n.a = x;
  n.dim = nodes_[x].dim;
  return push(std::move(n));
}

NodeId ScalarField::reciprocal(NodeId x) {
  check(x);
  Node n;
  n.op = Op::reciprocal;
  n.a = x;
  n.dim = nodes_[x].dim;
  return push(std::move(n));
}

NodeId ScalarField::add(NodeId a, NodeId b) {
  check(a);
  check(b);
  if (nodes_[a].dim != nodes_[b].dim) throw DomainError("add operands differ in dimension");
  Node n;
  n.op = Op::add;
  n.a = a;
  n.b = b;
  n.dim = nodes_[a].dim;
  return push(std::move(n));
}

NodeId ScalarField::mul(NodeId a, NodeId b) {
  check(a);
  check(b);
  if (nodes_[a].dim != nodes_[b].dim) throw DomainError("mul operands differ in dimension");
  Node n;
  n.op = Op::mul;
  n.a = a;
  n.b = b;
  n.dim = nodes_[a].dim;
  return push(std::move(n));
}

void ScalarField::set_output(NodeId node) {
  check(node);
  if (nodes_[node].dim != 1) throw DomainError("field output must be a scalar node");
  output_ = node;
  has_output_ = true;
}

// ---------------------------------------------------------------------------
// Forward sweep

namespace {

struct Blocks {
  Eigen::Index batch;
  Eigen::Index dirs;
  Eigen::Index d(Eigen::Index i) const { return batch * (1 + i); }
  Eigen::Index dd(Eigen::Index i) const { return batch * (1 + dirs + i); }
};

void check_call(const ScalarField& field, Eigen::Index rows, std::size_t params_size, std::span<const std::size_t> directions) {
  if (!field.has_output()) throw DomainError("field has no output node");
  if (static_cast<std::size_t>(rows) != field.arity())
    throw DomainError("input dimension " + std::to_string(rows) + " does not match field arity " + std::to_string(field.arity()));
  if (params_size < field.param_extent()) throw DomainError("parameter vector shorter than the field requires");
  for (std::size_t i = 0; i < directions.size(); ++i) {
    if (directions[i] >= field.arity())
      throw DomainError("Laplacian coordinate " + std::to_string(directions[i]) + " out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (directions[j] == directions[i]) throw DomainError("Laplacian coordinates must be distinct");
  }
}

// Value and first three derivatives of an elementwise primitive.
void unary_derivatives(Op op, const Eigen::Ref<const Matrix>& x, Eigen::Ref<Matrix> g, Matrix& g1, Matrix* g2, Matrix* g3) {
  const auto xa = x.array();
  switch (op) {
    case Op::tanh: {
      // Via the vectorised exp; Eigen's double tanh is scalar and dominates training time.
      // Clamping keeps exp finite; tanh(20) already rounds to 1.
      const Eigen::ArrayXXd e = (2.0 * xa.max(-20.0).min(20.0)).exp();
      g = ((e - 1.0) / (e + 1.0)).matrix();
      g1 = (1.0 - g.array().square()).matrix();
      if (g2) *g2 = (-2.0 * g.array() * g1.array()).matrix();
      if (g3) *g3 = (-2.0 * g1.array().square() - 2.0 * g.array() * g2->array()).matrix();
      break;
    }
    case Op::sine:
      g = xa.sin().matrix();
      g1 = xa.cos().matrix();
      if (g2) *g2 = -g;
      if (g3) *g3 = -g1;
      break;
    case Op::sqrt:
      g = xa.sqrt().matrix();
      g1 = (0.5 / g.array()).matrix();
      if (g2) *g2 = (-0.5 * g1.array() / xa).matrix();
      if (g3) *g3 = (-1.5 * g2->array() / xa).matrix();
      break;
    case Op::reciprocal:
      g = xa.inverse().matrix();
      g1 = (-g.array().square()).matrix();
      if (g2) *g2 = (-2.0 * g1.array() * g.array()).matrix();
      if (g3) *g3 = (-3.0 * g2->array() * g.array()).matrix();
      break;
    default:
      throw DomainError("not an elementwise primitive");
  }
}

}  // namespace

BatchOutput forward(const ScalarField& field, const Eigen::Ref<const Matrix>& inputs, const Vector& params,
                    std::span<const std::size_t> directions, Tape& tape) {
  check_call(field, inputs.rows(), static_cast<std::size_t>(params.size()), directions);
  const auto& nodes = field.nodes();
  const Eigen::Index B = inputs.cols();
  const Eigen::Index nd = static_cast<Eigen::Index>(directions.size());
  const Blocks blk{B, nd};
  const Eigen::Index full = B * (1 + 2 * nd);

  tape.batch = static_cast<std::size_t>(B);
  tape.directions.assign(directions.begin(), directions.end());
  // Buffers are kept across calls so repeated sweeps over equal batches do not reallocate.
  tape.channels.resize(nodes.size());
  tape.slope.resize(nodes.size());
  tape.curvature.resize(nodes.size());
  tape.third.resize(nodes.size());
  tape.active.assign(nodes.size(), 0);
  tape.needs_grad.assign(nodes.size(), 0);

  for (std::size_t id = 0; id < nodes.size(); ++id) {
    const Node& n = nodes[id];
    const Eigen::Index dim = static_cast<Eigen::Index>(n.dim);
    Matrix& out = tape.channels[id];
    switch (n.op) {
      case Op::input: {
        bool active = false;
        for (auto c : n.coords)
          for (auto d : directions) active = active || c == d;
        tape.active[id] = active;
        out.resize(dim, active ? full : B);
        if (active) out.setZero();
        for (Eigen::Index j = 0; j < dim; ++j) out.row(j).head(B) = inputs.row(static_cast<Eigen::Index>(n.coords[j]));
        if (active)
          for (Eigen::Index i = 0; i < nd; ++i)
            for (Eigen::Index j = 0; j < dim; ++j)
              if (n.coords[j] == directions[i]) out.row(j).segment(blk.d(i), B).setOnes();
        break;
      }
      case Op::constant:
        out = n.offset.replicate(1, B);
        break;
      case Op::affine: {
        tape.active[id] = tape.active[n.a];
        tape.needs_grad[id] = tape.needs_grad[n.a];
        out.noalias() = n.matrix * tape.channels[n.a];
        out.leftCols(B).colwise() += n.offset;
        break;
      }
      case Op::param_affine: {
        tape.active[id] = tape.active[n.a];
        tape.needs_grad[id] = 1;
        const Matrix& x = tape.channels[n.a];
        const ConstRowMajorMap W(params.data() + n.param_offset, dim, x.rows());
        const Eigen::Map<const Vector> bias(params.data() + n.param_offset + n.dim * static_cast<std::size_t>(x.rows()), dim);
        out.noalias() = W * x;
        out.leftCols(B).colwise() += bias;
        break;
      }
      case Op::tanh:
      case Op::sine:
      case Op::sqrt:
      case Op::reciprocal: {
        tape.active[id] = tape.active[n.a];
        tape.needs_grad[id] = tape.needs_grad[n.a];
        const Matrix& x = tape.channels[n.a];
        out.resize(dim, x.cols());
        const bool active = tape.active[id];
        unary_derivatives(n.op, x.leftCols(B), out.leftCols(B), tape.slope[id], active ? &tape.curvature[id] : nullptr,
                          active ? &tape.third[id] : nullptr);
        if (active) {
          const Matrix& t1 = tape.slope[id];
          const Matrix& t2 = tape.curvature[id];
          for (Eigen::Index i = 0; i < nd; ++i) {
            const auto dx = x.middleCols(blk.d(i), B).array();
            const auto ddx = x.middleCols(blk.dd(i), B).array();
            out.middleCols(blk.d(i), B) = (t1.array() * dx).matrix();
            out.middleCols(blk.dd(i), B) = (t1.array() * ddx + t2.array() * dx.square()).matrix();
          }
        }
        break;
      }
      case Op::add: {
        const bool aa = tape.active[n.a], ab = tape.active[n.b];
        tape.active[id] = aa || ab;
        tape.needs_grad[id] = tape.needs_grad[n.a] || tape.needs_grad[n.b];
        const Matrix& xa = tape.channels[n.a];
        const Matrix& xb = tape.channels[n.b];
        if (aa == ab) {
          out = xa + xb;
        } else {
          out = aa ? xa : xb;
          out.leftCols(B) += (aa ? xb : xa).leftCols(B);
        }
        break;
      }
      case Op::mul: {
        const bool aa = tape.active[n.a], ab = tape.active[n.b];
        tape.active[id] = aa || ab;
        tape.needs_grad[id] = tape.needs_grad[n.a] || tape.needs_grad[n.b];
        const Matrix& xa = tape.channels[n.a];
        const Matrix& xb = tape.channels[n.b];
        out.resize(dim, (aa || ab) ? full : B);
        const auto va = xa.leftCols(B).array();
        const auto vb = xb.leftCols(B).array();
        out.leftCols(B) = (va * vb).matrix();
        for (Eigen::Index i = 0; i < nd && (aa || ab); ++i) {
          auto d = out.middleCols(blk.d(i), B).array();
          auto dd = out.middleCols(blk.dd(i), B).array();
          d.setZero();
          dd.setZero();
          if (aa) {
            d += xa.middleCols(blk.d(i), B).array() * vb;
            dd += xa.middleCols(blk.dd(i), B).array() * vb;
          }
          if (ab) {
            d += va * xb.middleCols(blk.d(i), B).array();
            dd += va * xb.middleCols(blk.dd(i), B).array();
          }
          if (aa && ab) dd += 2.0 * xa.middleCols(blk.d(i), B).array() * xb.middleCols(blk.d(i), B).array();
        }
        break;
      }
    }
  }

  BatchOutput result;
  const Matrix& y = tape.channels[field.output()];
  result.value = y.row(0).head(B);
  if (nd > 0) {
    result.laplacian = RowVector::Zero(B);
    if (tape.active[field.output()])
      for (Eigen::Index i = 0; i < nd; ++i) result.laplacian += y.row(0).segment(blk.dd(i), B);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Reverse sweep

void backward(const ScalarField& field, const Vector& params, const Tape& tape, const RowVector& value_seed,
              const RowVector& laplacian_seed, Eigen::Ref<Vector> grad) {
  const auto& nodes = field.nodes();
  if (tape.channels.size() != nodes.size()) throw DomainError("tape does not belong to this field");
  if (static_cast<std::size_t>(grad.size()) < field.param_extent()) throw DomainError("gradient buffer too short");
  const Eigen::Index B = static_cast<Eigen::Index>(tape.batch);
  const Eigen::Index nd = static_cast<Eigen::Index>(tape.directions.size());
  const Blocks blk{B, nd};
  if (value_seed.size() != B) throw DomainError("value seed length must equal the batch size");
  const bool lap_seeded = laplacian_seed.size() > 0;
  if (lap_seeded && laplacian_seed.size() != B) throw DomainError("Laplacian seed length must equal the batch size");

  std::vector<Matrix> adj(nodes.size());
  auto adjoint_of = [&](NodeId id) -> Matrix& {
    Matrix& m = adj[id];
    if (m.size() == 0) m = Matrix::Zero(tape.channels[id].rows(), tape.channels[id].cols());
    return m;
  };

  const NodeId out = field.output();
  if (!tape.needs_grad[out]) return;
  {
    Matrix& y = adjoint_of(out);
    y.row(0).head(B) = value_seed;
    if (lap_seeded && tape.active[out])
      for (Eigen::Index i = 0; i < nd; ++i) y.row(0).segment(blk.dd(i), B) = laplacian_seed;
  }

  for (std::size_t k = nodes.size(); k-- > 0;) {
    const NodeId id = k;
    if (adj[id].size() == 0 || !tape.needs_grad[id]) continue;
    const Node& n = nodes[id];
    const Matrix& ybar = adj[id];
    switch (n.op) {
      case Op::input:
      case Op::constant:
        break;
      case Op::affine:
        if (tape.needs_grad[n.a]) adjoint_of(n.a).noalias() += n.matrix.transpose() * ybar;
        break;
      case Op::param_affine: {
        const Matrix& x = tape.channels[n.a];
        const Eigen::Index dim = static_cast<Eigen::Index>(n.dim);
        const std::size_t wsize = n.dim * static_cast<std::size_t>(x.rows());
        RowMajorMap gW(grad.data() + n.param_offset, dim, x.rows());
        Eigen::Map<Vector> gb(grad.data() + n.param_offset + wsize, dim);
        gW.noalias() += ybar * x.transpose();
        gb += ybar.leftCols(B).rowwise().sum();
        if (tape.needs_grad[n.a]) {
          const ConstRowMajorMap W(params.data() + n.param_offset, dim, x.rows());
          adjoint_of(n.a).noalias() += W.transpose() * ybar;
        }
        break;
      }
      case Op::tanh:
      case Op::sine:
      case Op::sqrt:
      case Op::reciprocal: {
        if (!tape.needs_grad[n.a]) break;
        Matrix& xbar = adjoint_of(n.a);
        const Matrix& t1 = tape.slope[id];
        xbar.leftCols(B).array() += ybar.leftCols(B).array() * t1.array();
        if (tape.active[id]) {
          const Matrix& x = tape.channels[n.a];
          const Matrix& t2 = tape.curvature[id];
          const Matrix& t3 = tape.third[id];
          for (Eigen::Index i = 0; i < nd; ++i) {
            const auto dx = x.middleCols(blk.d(i), B).array();
            const auto ddx = x.middleCols(blk.dd(i), B).array();
            const auto yd = ybar.middleCols(blk.d(i), B).array();
            const auto ydd = ybar.middleCols(blk.dd(i), B).array();
            xbar.leftCols(B).array() += yd * t2.array() * dx + ydd * (t3.array() * dx.square() + t2.array() * ddx);
            xbar.middleCols(blk.d(i), B).array() += yd * t1.array() + 2.0 * ydd * t2.array() * dx;
            xbar.middleCols(blk.dd(i), B).array() += ydd * t1.array();
          }
        }
        break;
      }
      case Op::add:
        for (NodeId child : {n.a, n.b}) {
          if (!tape.needs_grad[child]) continue;
          Matrix& cbar = adjoint_of(child);
          if (cbar.cols() == ybar.cols())
            cbar += ybar;
          else
            cbar += ybar.leftCols(B);
        }
        break;
      case Op::mul: {
        const bool aa = tape.active[n.a], ab = tape.active[n.b];
        const Matrix& xa = tape.channels[n.a];
        const Matrix& xb = tape.channels[n.b];
        // Contribution to operand `self` given the other operand `other`.
        auto contribution = [&](const Matrix& other, bool self_active, bool other_active) {
          Matrix c = Matrix::Zero(xa.rows(), self_active ? ybar.cols() : B);
          const auto vo = other.leftCols(B).array();
          c.leftCols(B).array() = ybar.leftCols(B).array() * vo;
          if (tape.active[id]) {
            for (Eigen::Index i = 0; i < nd; ++i) {
              const auto yd = ybar.middleCols(blk.d(i), B).array();
              const auto ydd = ybar.middleCols(blk.dd(i), B).array();
              if (other_active)
                c.leftCols(B).array() += yd * other.middleCols(blk.d(i), B).array() + ydd * other.middleCols(blk.dd(i), B).array();
              if (self_active) {
                c.middleCols(blk.d(i), B).array() += yd * vo;
                if (other_active) c.middleCols(blk.d(i), B).array() += 2.0 * ydd * other.middleCols(blk.d(i), B).array();
                c.middleCols(blk.dd(i), B).array() += ydd * vo;
              }
            }
          }
          return c;
        };
        Matrix ca, cb;
        if (tape.needs_grad[n.a]) ca = contribution(xb, aa, ab);
        if (tape.needs_grad[n.b]) cb = contribution(xa, ab, aa);
        if (tape.needs_grad[n.a]) adjoint_of(n.a) += ca;
        if (tape.needs_grad[n.b]) adjoint_of(n.b) += cb;
        break;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Single-point entry points

namespace {

Matrix column(std::span<const double> inputs) {
  Matrix x(static_cast<Eigen::Index>(inputs.size()), 1);
  for (std::size_t i = 0; i < inputs.size(); ++i) x(static_cast<Eigen::Index>(i), 0) = inputs[i];
  return x;
}

}  // namespace

double eval(const ScalarField& field, std::span<const double> inputs, const ParamVector& params) {
  Tape tape;
  return forward(field, column(inputs), params.values, {}, tape).value(0);
}

ParamVector grad_params(const ScalarField& field, std::span<const double> inputs, const ParamVector& params) {
  Tape tape;
  forward(field, column(inputs), params.values, {}, tape);
  ParamVector g(params.layout);
  if (g.values.size() < params.values.size()) g.values = Vector::Zero(params.values.size());
  backward(field, params.values, tape, RowVector::Ones(1), RowVector(), g.values);
  return g;
}

double laplacian(const ScalarField& field, std::span<const double> inputs, const ParamVector& params,
                 std::span<const std::size_t> coord_indices) {
  Tape tape;
  return forward(field, column(inputs), params.values, coord_indices, tape).laplacian(0);
}

ParamVector grad_params_of_laplacian(const ScalarField& field, std::span<const double> inputs, const ParamVector& params,
                                     std::span<const std::size_t> coord_indices) {
  Tape tape;
  forward(field, column(inputs), params.values, coord_indices, tape);
  ParamVector g(params.layout);
  if (g.values.size() < params.values.size()) g.values = Vector::Zero(params.values.size());
  backward(field, params.values, tape, RowVector::Zero(1), RowVector::Ones(1), g.values);
  return g;
}

}  // namespace pipinn::diff
