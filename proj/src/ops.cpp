#include "c2aug/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "c2aug/kernels.hpp"

namespace c2aug::ops {

namespace {

const double kMaskLogit = -9999.0;

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(msg);
}

// Shared forward kernel: softmax of one row with -9999 substitution for
// masked entries. Returns false when every entry is masked.
bool softmax_row(const double* x, const std::uint8_t* masked, double* out,
                 std::size_t m) {
  bool any_unmasked = false;
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const bool is_masked = masked && masked[i];
    any_unmasked = any_unmasked || !is_masked;
    const double xi = is_masked ? kMaskLogit : x[i];
    if (xi > mx) mx = xi;
  }
  if (!any_unmasked) return false;
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double xi = (masked && masked[i]) ? kMaskLogit : x[i];
    out[i] = std::exp(xi - mx);
    z += out[i];
  }
  const double inv = 1.0 / z;
  kern::active().scal(inv, out, m);
  return true;
}

// dL/dx_i = p_i * (g_i - sum_j g_j p_j); masked positions get exactly zero.
void softmax_row_backward(const double* p, const double* g,
                          const std::uint8_t* masked, double* dx,
                          std::size_t m) {
  const double s = kern::active().dot(p, g, m);
  for (std::size_t i = 0; i < m; ++i) {
    if (masked && masked[i]) continue;
    dx[i] += p[i] * (g[i] - s);
  }
}

}  // namespace

NodeId add(Tape& t, NodeId a, NodeId b) {
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  require(av.same_shape(bv), "add: shape mismatch");
  Tensor out = Tensor::zeros_like(av);
  kern::active().vadd(av.data.data(), bv.data.data(), out.data.data(), out.size());
  return t.emplace(std::move(out), {a, b}, [a, b](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    kern::active().axpy(1.0, g.data.data(), tp.grad_buffer(a).data.data(), g.size());
    kern::active().axpy(1.0, g.data.data(), tp.grad_buffer(b).data.data(), g.size());
  });
}

NodeId sub(Tape& t, NodeId a, NodeId b) {
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  require(av.same_shape(bv), "sub: shape mismatch");
  Tensor out = Tensor::zeros_like(av);
  kern::active().vsub(av.data.data(), bv.data.data(), out.data.data(), out.size());
  return t.emplace(std::move(out), {a, b}, [a, b](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    kern::active().axpy(1.0, g.data.data(), tp.grad_buffer(a).data.data(), g.size());
    kern::active().axpy(-1.0, g.data.data(), tp.grad_buffer(b).data.data(), g.size());
  });
}

NodeId mul(Tape& t, NodeId a, NodeId b) {
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  require(av.same_shape(bv), "mul: shape mismatch");
  Tensor out = Tensor::zeros_like(av);
  kern::active().vmul(av.data.data(), bv.data.data(), out.data.data(), out.size());
  return t.emplace(std::move(out), {a, b}, [a, b](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    const Tensor& av2 = tp.value(a);
    const Tensor& bv2 = tp.value(b);
    Tensor& ga = tp.grad_buffer(a);
    Tensor& gb = tp.grad_buffer(b);
    for (std::size_t i = 0; i < g.size(); ++i) {
      ga[i] += g[i] * bv2[i];
      gb[i] += g[i] * av2[i];
    }
  });
}

NodeId scale(Tape& t, NodeId a, double c) {
  Tensor out = t.value(a);
  kern::active().scal(c, out.data.data(), out.size());
  return t.emplace(std::move(out), {a}, [a, c](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    kern::active().axpy(c, g.data.data(), tp.grad_buffer(a).data.data(), g.size());
  });
}

NodeId relu(Tape& t, NodeId a) {
  Tensor out = t.value(a);
  for (double& v : out.data) v = v > 0.0 ? v : 0.0;
  return t.emplace(std::move(out), {a}, [a](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    const Tensor& av = tp.value(a);
    Tensor& ga = tp.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (av[i] > 0.0) ga[i] += g[i];
  });
}

NodeId tanh_act(Tape& t, NodeId a) {
  Tensor out = t.value(a);
  for (double& v : out.data) v = std::tanh(v);
  return t.emplace(std::move(out), {a}, [a](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    const Tensor& y = tp.value(self);
    Tensor& ga = tp.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

NodeId sigmoid(Tape& t, NodeId a) {
  Tensor out = t.value(a);
  for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
  return t.emplace(std::move(out), {a}, [a](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    const Tensor& y = tp.value(self);
    Tensor& ga = tp.grad_buffer(a);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

NodeId matmul(Tape& t, NodeId a, NodeId b) {
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  require(av.ndim() == 2 && bv.ndim() == 2 && av.cols() == bv.rows(),
          "matmul: shape mismatch");
  const std::size_t m = av.rows(), k = av.cols(), n = bv.cols();
  Tensor out = Tensor::zeros({m, n});
  kern::active().gemm_nn(av.data.data(), bv.data.data(), out.data.data(), m, k, n);
  return t.emplace(std::move(out), {a, b}, [a, b, m, k, n](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    // dA += G * B^T, dB += A^T * G
    kern::active().gemm_nt(g.data.data(), tp.value(b).data.data(),
                           tp.grad_buffer(a).data.data(), m, n, k);
    kern::active().gemm_tn(tp.value(a).data.data(), g.data.data(),
                           tp.grad_buffer(b).data.data(), k, m, n);
  });
}

NodeId add_rowvec(Tape& t, NodeId a, NodeId v) {
  const Tensor& av = t.value(a);
  const Tensor& vv = t.value(v);
  require(av.ndim() == 2 && vv.ndim() == 1 && av.cols() == vv.size(),
          "add_rowvec: shape mismatch");
  Tensor out = av;
  for (std::size_t i = 0; i < av.rows(); ++i)
    kern::active().axpy(1.0, vv.data.data(), out.row_ptr(i), av.cols());
  return t.emplace(std::move(out), {a, v}, [a, v](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    Tensor& ga = tp.grad_buffer(a);
    Tensor& gv = tp.grad_buffer(v);
    kern::active().axpy(1.0, g.data.data(), ga.data.data(), g.size());
    for (std::size_t i = 0; i < g.rows(); ++i)
      kern::active().axpy(1.0, g.row_ptr(i), gv.data.data(), g.cols());
  });
}

NodeId matvec(Tape& t, NodeId a, NodeId x) {
  const Tensor& av = t.value(a);
  const Tensor& xv = t.value(x);
  require(av.ndim() == 2 && xv.ndim() == 1 && av.cols() == xv.size(),
          "matvec: shape mismatch");
  const std::size_t m = av.rows(), n = av.cols();
  Tensor out = Tensor::zeros({m});
  kern::active().gemv_n(av.data.data(), xv.data.data(), out.data.data(), m, n);
  return t.emplace(std::move(out), {a, x}, [a, x, m, n](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    const Tensor& xv2 = tp.value(x);
    Tensor& ga = tp.grad_buffer(a);
    for (std::size_t i = 0; i < m; ++i)
      kern::active().axpy(g[i], xv2.data.data(), ga.row_ptr(i), n);
    kern::active().gemv_t(tp.value(a).data.data(), g.data.data(),
                          tp.grad_buffer(x).data.data(), m, n);
  });
}

NodeId vecmat(Tape& t, NodeId v, NodeId a) {
  const Tensor& vv = t.value(v);
  const Tensor& av = t.value(a);
  require(av.ndim() == 2 && vv.ndim() == 1 && av.rows() == vv.size(),
          "vecmat: shape mismatch");
  const std::size_t m = av.rows(), n = av.cols();
  Tensor out = Tensor::zeros({n});
  kern::active().gemv_t(av.data.data(), vv.data.data(), out.data.data(), m, n);
  return t.emplace(std::move(out), {v, a}, [v, a, m, n](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    kern::active().gemv_n(tp.value(a).data.data(), g.data.data(),
                          tp.grad_buffer(v).data.data(), m, n);
    const Tensor& vv2 = tp.value(v);
    Tensor& ga = tp.grad_buffer(a);
    for (std::size_t i = 0; i < m; ++i)
      kern::active().axpy(vv2[i], g.data.data(), ga.row_ptr(i), n);
  });
}

NodeId rows_dot(Tape& t, NodeId a, NodeId b) {
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  require(av.ndim() == 2 && av.same_shape(bv), "rows_dot: shape mismatch");
  const std::size_t n = av.rows(), d = av.cols();
  Tensor out = Tensor::zeros({n});
  for (std::size_t i = 0; i < n; ++i)
    out[i] = kern::active().dot(av.row_ptr(i), bv.row_ptr(i), d);
  return t.emplace(std::move(out), {a, b}, [a, b, n, d](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    const Tensor& av2 = tp.value(a);
    const Tensor& bv2 = tp.value(b);
    Tensor& ga = tp.grad_buffer(a);
    Tensor& gb = tp.grad_buffer(b);
    for (std::size_t i = 0; i < n; ++i) {
      kern::active().axpy(g[i], bv2.row_ptr(i), ga.row_ptr(i), d);
      kern::active().axpy(g[i], av2.row_ptr(i), gb.row_ptr(i), d);
    }
  });
}

NodeId scale_rows(Tape& t, NodeId a, NodeId w) {
  const Tensor& av = t.value(a);
  const Tensor& wv = t.value(w);
  require(av.ndim() == 2 && wv.ndim() == 1 && av.rows() == wv.size(),
          "scale_rows: shape mismatch");
  const std::size_t n = av.rows(), d = av.cols();
  Tensor out = av;
  for (std::size_t i = 0; i < n; ++i) kern::active().scal(wv[i], out.row_ptr(i), d);
  return t.emplace(std::move(out), {a, w}, [a, w, n, d](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    const Tensor& av2 = tp.value(a);
    const Tensor& wv2 = tp.value(w);
    Tensor& ga = tp.grad_buffer(a);
    Tensor& gw = tp.grad_buffer(w);
    for (std::size_t i = 0; i < n; ++i) {
      kern::active().axpy(wv2[i], g.row_ptr(i), ga.row_ptr(i), d);
      gw[i] += kern::active().dot(g.row_ptr(i), av2.row_ptr(i), d);
    }
  });
}

NodeId stack_rows(Tape& t, std::span<const NodeId> rows) {
  require(!rows.empty(), "stack_rows: empty input");
  const std::size_t d = t.value(rows[0]).size();
  Tensor out = Tensor::zeros({rows.size(), d});
  std::vector<NodeId> parents;
  parents.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Tensor& r = t.value(rows[i]);
    require(r.ndim() == 1 && r.size() == d, "stack_rows: ragged rows");
    std::copy(r.data.begin(), r.data.end(), out.row_ptr(i));
    parents.push_back(rows[i]);
  }
  return t.emplace(std::move(out), std::move(parents), [d](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    const auto& ps = tp.parents(self);
    for (std::size_t i = 0; i < ps.size(); ++i)
      kern::active().axpy(1.0, g.row_ptr(i), tp.grad_buffer(ps[i]).data.data(), d);
  });
}

NodeId concat_vec(Tape& t, std::span<const NodeId> parts) {
  require(!parts.empty(), "concat_vec: empty input");
  std::size_t total = 0;
  for (NodeId p : parts) total += t.value(p).size();
  Tensor out = Tensor::zeros({total});
  std::vector<NodeId> parents(parts.begin(), parts.end());
  std::size_t off = 0;
  for (NodeId p : parts) {
    const Tensor& v = t.value(p);
    std::copy(v.data.begin(), v.data.end(), out.data.begin() + static_cast<long>(off));
    off += v.size();
  }
  return t.emplace(std::move(out), std::move(parents), [](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    std::size_t off2 = 0;
    for (NodeId p : tp.parents(self)) {
      Tensor& gp = tp.grad_buffer(p);
      kern::active().axpy(1.0, g.data.data() + off2, gp.data.data(), gp.size());
      off2 += gp.size();
    }
  });
}

NodeId stack_cols(Tape& t, std::span<const NodeId> cols) {
  require(!cols.empty(), "stack_cols: empty input");
  const std::size_t n = t.value(cols[0]).size();
  const std::size_t m = cols.size();
  Tensor out = Tensor::zeros({n, m});
  std::vector<NodeId> parents(cols.begin(), cols.end());
  for (std::size_t c = 0; c < m; ++c) {
    const Tensor& v = t.value(cols[c]);
    require(v.ndim() == 1 && v.size() == n, "stack_cols: ragged columns");
    for (std::size_t i = 0; i < n; ++i) out.at(i, c) = v[i];
  }
  return t.emplace(std::move(out), std::move(parents), [n, m](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    const auto& ps = tp.parents(self);
    for (std::size_t c = 0; c < m; ++c) {
      Tensor& gp = tp.grad_buffer(ps[c]);
      for (std::size_t i = 0; i < n; ++i) gp[i] += g.at(i, c);
    }
  });
}

NodeId vconcat(Tape& t, NodeId a, NodeId b) {
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  require(av.ndim() == 2 && bv.ndim() == 2 && av.cols() == bv.cols(),
          "vconcat: column mismatch");
  Tensor out = Tensor::zeros({av.rows() + bv.rows(), av.cols()});
  std::copy(av.data.begin(), av.data.end(), out.data.begin());
  std::copy(bv.data.begin(), bv.data.end(),
            out.data.begin() + static_cast<long>(av.size()));
  return t.emplace(std::move(out), {a, b}, [a, b](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    Tensor& ga = tp.grad_buffer(a);
    Tensor& gb = tp.grad_buffer(b);
    kern::active().axpy(1.0, g.data.data(), ga.data.data(), ga.size());
    kern::active().axpy(1.0, g.data.data() + ga.size(), gb.data.data(), gb.size());
  });
}

NodeId row(Tape& t, NodeId a, std::size_t i) {
  const Tensor& av = t.value(a);
  require(av.ndim() == 2 && i < av.rows(), "row: index out of range");
  const std::size_t d = av.cols();
  Tensor out = Tensor::zeros({d});
  std::copy(av.row_ptr(i), av.row_ptr(i) + d, out.data.begin());
  return t.emplace(std::move(out), {a}, [a, i, d](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    kern::active().axpy(1.0, g.data.data(), tp.grad_buffer(a).row_ptr(i), d);
  });
}

NodeId gather_rows(Tape& t, NodeId a, std::vector<std::size_t> idx) {
  const Tensor& av = t.value(a);
  require(av.ndim() == 2, "gather_rows: matrix expected");
  const std::size_t d = av.cols();
  Tensor out = Tensor::zeros({idx.size(), d});
  for (std::size_t i = 0; i < idx.size(); ++i) {
    require(idx[i] < av.rows(), "gather_rows: index out of range");
    std::copy(av.row_ptr(idx[i]), av.row_ptr(idx[i]) + d, out.row_ptr(i));
  }
  return t.emplace(std::move(out), {a},
                   [a, idx = std::move(idx), d](Tape& tp, NodeId self) {
                     const Tensor& g = tp.grad_buffer(self);
                     Tensor& ga = tp.grad_buffer(a);
                     for (std::size_t i = 0; i < idx.size(); ++i)
                       kern::active().axpy(1.0, g.row_ptr(i), ga.row_ptr(idx[i]), d);
                   });
}

NodeId masked_softmax(Tape& t, NodeId logits, const std::vector<std::uint8_t>* masked) {
  const Tensor& x = t.value(logits);
  require(x.ndim() == 1 && x.size() > 0, "masked_softmax: vector expected");
  require(!masked || masked->size() == x.size(), "masked_softmax: mask length mismatch");
  Tensor out = Tensor::zeros({x.size()});
  if (!softmax_row(x.data.data(), masked ? masked->data() : nullptr, out.data.data(),
                   x.size()))
    throw Error("degenerate mask");
  std::vector<std::uint8_t> m = masked ? *masked : std::vector<std::uint8_t>{};
  return t.emplace(std::move(out), {logits},
                   [logits, m = std::move(m)](Tape& tp, NodeId self) {
                     const Tensor& g = tp.grad_buffer(self);
                     const Tensor& p = tp.value(self);
                     softmax_row_backward(p.data.data(), g.data.data(),
                                          m.empty() ? nullptr : m.data(),
                                          tp.grad_buffer(logits).data.data(), p.size());
                   });
}

NodeId row_masked_softmax(Tape& t, NodeId logits,
                          const std::vector<std::uint8_t>* masked) {
  const Tensor& x = t.value(logits);
  require(x.ndim() == 2, "row_masked_softmax: matrix expected");
  const std::size_t n = x.rows(), m = x.cols();
  require(!masked || masked->size() == n * m, "row_masked_softmax: mask size mismatch");
  Tensor out = Tensor::zeros({n, m});
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint8_t* mrow = masked ? masked->data() + i * m : nullptr;
    if (!softmax_row(x.row_ptr(i), mrow, out.row_ptr(i), m)) throw Error("degenerate mask");
  }
  std::vector<std::uint8_t> mk = masked ? *masked : std::vector<std::uint8_t>{};
  return t.emplace(std::move(out), {logits},
                   [logits, mk = std::move(mk), n, m](Tape& tp, NodeId self) {
                     const Tensor& g = tp.grad_buffer(self);
                     const Tensor& p = tp.value(self);
                     Tensor& gx = tp.grad_buffer(logits);
                     for (std::size_t i = 0; i < n; ++i)
                       softmax_row_backward(p.row_ptr(i), g.row_ptr(i),
                                            mk.empty() ? nullptr : mk.data() + i * m,
                                            gx.row_ptr(i), m);
                   });
}

NodeId l2_normalize(Tape& t, NodeId v) {
  const Tensor& x = t.value(v);
  require(x.ndim() == 1 && x.size() > 0, "l2_normalize: vector expected");
  const double norm = std::sqrt(kern::active().dot(x.data.data(), x.data.data(), x.size()));
  if (norm == 0.0) throw Error("zero-norm embedding");
  Tensor out = x;
  kern::active().scal(1.0 / norm, out.data.data(), out.size());
  return t.emplace(std::move(out), {v}, [v, norm](Tape& tp, NodeId self) {
    const Tensor& g = tp.grad_buffer(self);
    const Tensor& y = tp.value(self);  // y = x / norm
    Tensor& gv = tp.grad_buffer(v);
    const double yg = kern::active().dot(y.data.data(), g.data.data(), g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      gv[i] += (g[i] - y[i] * yg) / norm;
  });
}

NodeId dot(Tape& t, NodeId a, NodeId b) {
  const Tensor& av = t.value(a);
  const Tensor& bv = t.value(b);
  require(av.same_shape(bv), "dot: shape mismatch");
  Tensor out = Tensor::scalar(
      kern::active().dot(av.data.data(), bv.data.data(), av.size()));
  return t.emplace(std::move(out), {a, b}, [a, b](Tape& tp, NodeId self) {
    const double g = tp.grad_buffer(self)[0];
    const Tensor& av2 = tp.value(a);
    const Tensor& bv2 = tp.value(b);
    kern::active().axpy(g, bv2.data.data(), tp.grad_buffer(a).data.data(), av2.size());
    kern::active().axpy(g, av2.data.data(), tp.grad_buffer(b).data.data(), av2.size());
  });
}

NodeId sum(Tape& t, NodeId a) {
  const Tensor& av = t.value(a);
  Tensor out = Tensor::scalar(kern::active().vsum(av.data.data(), av.size()));
  return t.emplace(std::move(out), {a}, [a](Tape& tp, NodeId self) {
    const double g = tp.grad_buffer(self)[0];
    Tensor& ga = tp.grad_buffer(a);
    for (double& v : ga.data) v += g;
  });
}

NodeId softmax_cross_entropy(Tape& t, NodeId logits, std::size_t label) {
  const Tensor& x = t.value(logits);
  require(x.ndim() == 1 && label < x.size(), "softmax_cross_entropy: bad label");
  const double mx = kern::active().vmax(x.data.data(), x.size());
  double z = 0.0;
  for (double v : x.data) z += std::exp(v - mx);
  const double loss = std::log(z) + mx - x[label];
  return t.emplace(Tensor::scalar(loss), {logits},
                   [logits, label, mx, z](Tape& tp, NodeId self) {
                     const double g = tp.grad_buffer(self)[0];
                     const Tensor& x2 = tp.value(logits);
                     Tensor& gx = tp.grad_buffer(logits);
                     for (std::size_t i = 0; i < x2.size(); ++i) {
                       const double p = std::exp(x2[i] - mx) / z;
                       gx[i] += g * (p - (i == label ? 1.0 : 0.0));
                     }
                   });
}

NodeId kl_div(Tape& t, NodeId p, NodeId q) {
  const Tensor& pv = t.value(p);
  const Tensor& qv = t.value(q);
  require(pv.same_shape(qv), "kl_div: shape mismatch");
  const double floor = 1e-12;
  double loss = 0.0;
  for (std::size_t i = 0; i < pv.size(); ++i) {
    if (pv[i] <= 0.0) continue;
    loss += pv[i] * (std::log(std::max(pv[i], floor)) - std::log(std::max(qv[i], floor)));
  }
  return t.emplace(Tensor::scalar(loss), {p}, [p, q, floor](Tape& tp, NodeId self) {
    const double g = tp.grad_buffer(self)[0];
    const Tensor& pv2 = tp.value(p);
    const Tensor& qv2 = tp.value(q);
    Tensor& gp = tp.grad_buffer(p);
    for (std::size_t i = 0; i < pv2.size(); ++i) {
      const double lp = std::log(std::max(pv2[i], floor));
      const double lq = std::log(std::max(qv2[i], floor));
      gp[i] += g * (lp - lq + 1.0);
    }
  });
}

NodeId cross_attention(Tape& t, NodeId q, NodeId k, NodeId v,
                       const std::vector<std::uint8_t>* masked, const AttnIds& w) {
  NodeId qp = w.wq >= 0 ? vecmat(t, q, w.wq) : q;
  NodeId kp = w.wk >= 0 ? matmul(t, k, w.wk) : k;
  NodeId vp = w.wv >= 0 ? matmul(t, v, w.wv) : v;
  const Tensor& kt = t.value(kp);
  require(t.value(qp).size() == kt.cols(), "cross_attention: shape error");
  require(t.value(vp).rows() == kt.rows(), "cross_attention: shape error");
  NodeId scores = scale(t, matvec(t, kp, qp), 1.0 / std::sqrt(double(kt.cols())));
  NodeId attn = masked_softmax(t, scores, masked);
  return vecmat(t, attn, vp);
}

NodeId linear(Tape& t, NodeId x, NodeId w, NodeId b) {
  NodeId y = matmul(t, x, w);
  return b >= 0 ? add_rowvec(t, y, b) : y;
}

}  // namespace c2aug::ops
