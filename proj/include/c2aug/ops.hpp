#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "c2aug/tape.hpp"

// Differentiable primitives. Each builder appends one node to the tape and
// registers its backward closure. Tensors are rank 1 or 2, row-major.

namespace c2aug::ops {

// Elementwise, identical shapes.
NodeId add(Tape& t, NodeId a, NodeId b);
NodeId sub(Tape& t, NodeId a, NodeId b);
NodeId mul(Tape& t, NodeId a, NodeId b);
NodeId scale(Tape& t, NodeId a, double c);

NodeId relu(Tape& t, NodeId a);
NodeId tanh_act(Tape& t, NodeId a);
NodeId sigmoid(Tape& t, NodeId a);

// C[m x n] = A[m x k] * B[k x n]
NodeId matmul(Tape& t, NodeId a, NodeId b);
// A[m x n] + v[n] broadcast over rows
NodeId add_rowvec(Tape& t, NodeId a, NodeId v);
// y[m] = A[m x n] * x[n]
NodeId matvec(Tape& t, NodeId a, NodeId x);
// y[n] = v[m] * A[m x n]
NodeId vecmat(Tape& t, NodeId v, NodeId a);
// out[i] = dot(A row i, B row i)
NodeId rows_dot(Tape& t, NodeId a, NodeId b);
// out row i = w[i] * A row i
NodeId scale_rows(Tape& t, NodeId a, NodeId w);

// Assembly. stack_rows: k vectors of length d -> [k x d]. concat_vec: 1-D
// concatenation. stack_cols: m vectors of length n -> [n x m]. vconcat: two
// matrices with equal column counts stacked vertically.
NodeId stack_rows(Tape& t, std::span<const NodeId> rows);
NodeId concat_vec(Tape& t, std::span<const NodeId> parts);
NodeId stack_cols(Tape& t, std::span<const NodeId> cols);
NodeId vconcat(Tape& t, NodeId a, NodeId b);
NodeId row(Tape& t, NodeId a, std::size_t i);
// Row gather with repeats allowed; backward scatter-adds.
NodeId gather_rows(Tape& t, NodeId a, std::vector<std::size_t> idx);

// Softmax over a length-m vector with the masked entries' logits replaced by
// -9999 before the exponential; mask may be null. Throws "degenerate mask"
// when every entry is masked. Masked positions carry zero gradient.
NodeId masked_softmax(Tape& t, NodeId logits, const std::vector<std::uint8_t>* masked);
// Same, applied to each row of an [n x m] matrix with an n*m row-major mask.
NodeId row_masked_softmax(Tape& t, NodeId logits, const std::vector<std::uint8_t>* masked);

// v / ||v||; throws "zero-norm embedding" for the zero vector.
NodeId l2_normalize(Tape& t, NodeId v);

NodeId dot(Tape& t, NodeId a, NodeId b);
NodeId sum(Tape& t, NodeId a);

// Numerically stable -log softmax(logits)[label].
NodeId softmax_cross_entropy(Tape& t, NodeId logits, std::size_t label);

// sum p * log(p / q) with a 1e-12 floor inside the logs. Gradient flows into
// p only; q is treated as data even when it is a tracked node.
NodeId kl_div(Tape& t, NodeId p, NodeId q);

// Single-query scaled dot-product attention with optional Q/K/V linear
// transforms (negative id = identity). The 1/sqrt(d) scale uses the
// post-projection feature dimension.
struct AttnIds {
  NodeId wq = -1;
  NodeId wk = -1;
  NodeId wv = -1;
};
NodeId cross_attention(Tape& t, NodeId q, NodeId k, NodeId v,
                       const std::vector<std::uint8_t>* masked, const AttnIds& w);

// X * W + b (b broadcast over rows; negative b = none).
NodeId linear(Tape& t, NodeId x, NodeId w, NodeId b);

}  // namespace c2aug::ops
