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

#pragma once

// Differentiation engine over small vector-valued computation graphs.
//
// A ScalarField is a DAG of vector nodes ending in a single scalar: inputs,
// constants, fixed and parameterised affine maps, and elementwise tanh, sine,
// add and mul, plus sqrt and reciprocal for the closed-form sound-field oracles. The engine evaluates it over a batch of points
// and, optionally, propagates first and second directional derivatives along
// chosen input coordinates (Taylor mode). A reverse sweep over that forward
// record yields parameter gradients of any linear combination of the output
// value and its Laplacian, which is what the PDE residual loss needs.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pipinn/core_types.hpp"

namespace pipinn::diff {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

struct ParamBlock {
  std::string name;
  std::size_t offset = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t size() const { return rows * cols; }
};

// Named tensors packed back to back into one flat vector.
class ParamLayout {
 public:
  std::size_t add(std::string name, std::size_t rows, std::size_t cols);
  const std::vector<ParamBlock>& blocks() const { return blocks_; }
  const ParamBlock& find(const std::string& name) const;
  std::size_t size() const { return size_; }
  // Blocks tile [0, size) contiguously with unique names.
  bool is_bijective() const;
  friend bool operator==(const ParamLayout&, const ParamLayout&);

 private:
  std::vector<ParamBlock> blocks_;
  std::size_t size_ = 0;
};

struct ParamVector {
  ParamLayout layout;
  Vector values;

  ParamVector() = default;
  explicit ParamVector(ParamLayout l) : layout(std::move(l)), values(Vector::Zero(static_cast<Eigen::Index>(layout.size()))) {}

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> block(const std::string& name);
  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> block(const std::string& name) const;
};

using NodeId = std::size_t;

enum class Op { input, constant, affine, param_affine, tanh, sine, sqrt, reciprocal, add, mul };

struct Node {
  Op op = Op::input;
  NodeId a = 0;
  NodeId b = 0;
  std::size_t dim = 0;
  std::vector<std::size_t> coords;  // input: selected coordinates
  Matrix matrix;                    // affine: fixed linear part
  Vector offset;                    // affine: fixed shift; constant: values
  std::size_t param_offset = 0;     // param_affine: row-major W (dim x in) followed by bias (dim)
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(std::size_t arity) : arity_(arity) {}

  NodeId input(std::vector<std::size_t> coords);
  NodeId constant(Vector values);
  NodeId affine(NodeId x, Matrix matrix, Vector offset);
  NodeId param_affine(NodeId x, std::size_t out_dim, std::size_t param_offset);
  NodeId tanh(NodeId x);
  NodeId sine(NodeId x);
  NodeId sqrt(NodeId x);
  NodeId reciprocal(NodeId x);
  NodeId add(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  void set_output(NodeId node);

  std::size_t arity() const { return arity_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  NodeId output() const { return output_; }
  bool has_output() const { return has_output_; }
  // Smallest parameter vector length the field can index into.
  std::size_t param_extent() const { return param_extent_; }

 private:
  NodeId push(Node node);
  void check(NodeId id) const;

  std::size_t arity_ = 0;
  std::vector<Node> nodes_;
  NodeId output_ = 0;
  bool has_output_ = false;
  std::size_t param_extent_ = 0;
};

// Per-call forward record. Columns are laid out [value | d/dx_i ... | d2/dx_i2 ...],
// each block `batch` wide; nodes that do not depend on the differentiated
// coordinates store only the value block.
struct Tape {
  std::size_t batch = 0;
  std::vector<std::size_t> directions;
  std::vector<Matrix> channels;
  std::vector<Matrix> slope;      // activation first derivative at the node input
  std::vector<Matrix> curvature;  // activation second derivative (active nodes only)
  std::vector<Matrix> third;      // activation third derivative (active nodes only)
  std::vector<char> active;
  std::vector<char> needs_grad;
};

struct BatchOutput {
  RowVector value;
  RowVector laplacian;  // empty when no directions were requested
};

// Forward sweep over `inputs` (arity x batch). `directions` lists the input
// coordinates whose pure second derivatives are summed into the Laplacian.
BatchOutput forward(const ScalarField& field, const Eigen::Ref<const Matrix>& inputs, const Vector& params,
                    std::span<const std::size_t> directions, Tape& tape);

// Reverse sweep: accumulates into `grad` the parameter gradient of
// sum_j value_seed[j] * value[j] + laplacian_seed[j] * laplacian[j].
void backward(const ScalarField& field, const Vector& params, const Tape& tape, const RowVector& value_seed,
              const RowVector& laplacian_seed, Eigen::Ref<Vector> grad);

double eval(const ScalarField& field, std::span<const double> inputs, const ParamVector& params);
ParamVector grad_params(const ScalarField& field, std::span<const double> inputs, const ParamVector& params);
double laplacian(const ScalarField& field, std::span<const double> inputs, const ParamVector& params,
                 std::span<const std::size_t> coord_indices);
ParamVector grad_params_of_laplacian(const ScalarField& field, std::span<const double> inputs, const ParamVector& params,
                                     std::span<const std::size_t> coord_indices);

}  // namespace pipinn::diff
