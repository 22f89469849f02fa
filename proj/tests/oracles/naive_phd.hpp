#pragma once

// Plain-array GM-PHD reference. Implements the predict / birth / update /
// prune-merge / extract cycle with direct scalar arithmetic and no linear
// algebra library, as an independent check of the production filter.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

struct NaiveComponent {
  double w = 0.0;
  double m[2] = {0.0, 0.0};
  double p[4] = {0.0, 0.0, 0.0, 0.0};  // row-major 2x2
};

struct NaiveMeasurement {
  double z[2] = {0.0, 0.0};
};

struct NaivePhdParams {
  double dt = 0.01;
  bool nlos = true;
  double ps = 0.98;
  double pd = 0.9;
  double birth_weight = 1e-5;
  double birth_cov_factor = 4.0;
  double kappa = 1e-3;
  double merge_radius = 0.7;
  double prune_threshold = 1e-6;
  std::size_t max_components = 30;
  double q_r_std = 3.5;
  double q_v_std = 1.8;
  double r_r_std = 1.8;
  double r_v_std = 1.8;
};

inline void invert2x2(const double a[4], double out[4]) {
  const double det = a[0] * a[3] - a[1] * a[2];
  out[0] = a[3] / det;
  out[1] = -a[1] / det;
  out[2] = -a[2] / det;
  out[3] = a[0] / det;
}

inline std::vector<NaiveComponent> naive_predict(const std::vector<NaiveComponent>& gm,
                                                 const NaivePhdParams& prm) {
  const double f01 = prm.nlos ? -prm.dt : prm.dt;
  std::vector<NaiveComponent> out;
  for (const NaiveComponent& c : gm) {
    NaiveComponent n;
    n.w = prm.ps * c.w;
    n.m[0] = c.m[0] + f01 * c.m[1];
    n.m[1] = c.m[1];
    // F P F^T with F = [[1, f01], [0, 1]]
    const double p00 = c.p[0] + f01 * c.p[2];
    const double p01 = c.p[1] + f01 * c.p[3];
    n.p[0] = p00 + f01 * p01 + prm.q_r_std * prm.q_r_std;
    n.p[1] = p01;
    n.p[2] = c.p[2] + f01 * c.p[3];
    n.p[3] = c.p[3] + prm.q_v_std * prm.q_v_std;
    // symmetrize as the production filter does
    const double off = 0.5 * (n.p[1] + n.p[2]);
    n.p[1] = off;
    n.p[2] = off;
    out.push_back(n);
  }
  return out;
}

inline void naive_add_birth(std::vector<NaiveComponent>& gm,
                            const std::vector<NaiveMeasurement>& previous,
                            const NaivePhdParams& prm) {
  for (const NaiveMeasurement& z : previous) {
    NaiveComponent c;
    c.w = prm.birth_weight;
    c.m[0] = z.z[0];
    c.m[1] = z.z[1];
    c.p[0] = prm.birth_cov_factor * prm.r_r_std * prm.r_r_std;
    c.p[3] = prm.birth_cov_factor * prm.r_v_std * prm.r_v_std;
    c.p[1] = c.p[2] = 0.0;
    gm.push_back(c);
  }
}

inline std::vector<NaiveComponent> naive_update(const std::vector<NaiveComponent>& gm,
                                                const std::vector<NaiveMeasurement>& zs,
                                                const NaivePhdParams& prm) {
  const double two_pi = 6.28318530717958647692528676655900577;
  std::vector<NaiveComponent> out;
  for (const NaiveComponent& c : gm) {
    NaiveComponent miss = c;
    miss.w = (1.0 - prm.pd) * c.w;
    out.push_back(miss);
  }
  if (zs.empty() || gm.empty()) return out;

  const double rr = prm.r_r_std * prm.r_r_std;
  const double rv = prm.r_v_std * prm.r_v_std;
  for (const NaiveMeasurement& z : zs) {
    std::vector<NaiveComponent> updated;
    double normalizer = prm.kappa;
    for (const NaiveComponent& c : gm) {
      double s[4] = {c.p[0] + rr, c.p[1], c.p[2], c.p[3] + rv};
      double s_inv[4];
      invert2x2(s, s_inv);
      const double det = s[0] * s[3] - s[1] * s[2];
      const double dz0 = z.z[0] - c.m[0];
      const double dz1 = z.z[1] - c.m[1];
      const double maha =
          dz0 * (s_inv[0] * dz0 + s_inv[1] * dz1) + dz1 * (s_inv[2] * dz0 + s_inv[3] * dz1);
      const double q = std::exp(-0.5 * maha) / (two_pi * std::sqrt(det));
      // K = P S^-1
      double k[4] = {c.p[0] * s_inv[0] + c.p[1] * s_inv[2], c.p[0] * s_inv[1] + c.p[1] * s_inv[3],
                     c.p[2] * s_inv[0] + c.p[3] * s_inv[2], c.p[2] * s_inv[1] + c.p[3] * s_inv[3]};
      NaiveComponent u;
      u.w = prm.pd * c.w * q;
      u.m[0] = c.m[0] + k[0] * dz0 + k[1] * dz1;
      u.m[1] = c.m[1] + k[2] * dz0 + k[3] * dz1;
      // (I - K) P
      const double i00 = 1.0 - k[0], i01 = -k[1], i10 = -k[2], i11 = 1.0 - k[3];
      u.p[0] = i00 * c.p[0] + i01 * c.p[2];
      u.p[1] = i00 * c.p[1] + i01 * c.p[3];
      u.p[2] = i10 * c.p[0] + i11 * c.p[2];
      u.p[3] = i10 * c.p[1] + i11 * c.p[3];
      const double off = 0.5 * (u.p[1] + u.p[2]);
      u.p[1] = off;
      u.p[2] = off;
      normalizer += u.w;
      updated.push_back(u);
    }
    if (normalizer <= 0.0) continue;
    for (NaiveComponent& u : updated) {
      u.w /= normalizer;
      out.push_back(u);
    }
  }
  return out;
}

inline std::vector<NaiveComponent> naive_prune_merge(const std::vector<NaiveComponent>& gm,
                                                     const NaivePhdParams& prm) {
  std::vector<NaiveComponent> pool;
  for (const NaiveComponent& c : gm) {
    if (c.w >= prm.prune_threshold && c.w > 0.0) pool.push_back(c);
  }
  std::vector<bool> used(pool.size(), false);
  std::vector<NaiveComponent> merged_list;
  std::size_t remaining = pool.size();
  while (remaining > 0) {
    std::size_t best = 0;
    double best_w = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!used[i] && pool[i].w > best_w) {
        best_w = pool[i].w;
        best = i;
      }
    }
    std::vector<std::size_t> cluster;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      if (i == best) {
        cluster.push_back(i);
        continue;
      }
      double p_inv[4];
      invert2x2(pool[i].p, p_inv);
      const double d0 = pool[i].m[0] - pool[best].m[0];
      const double d1 = pool[i].m[1] - pool[best].m[1];
      const double dist =
          d0 * (p_inv[0] * d0 + p_inv[1] * d1) + d1 * (p_inv[2] * d0 + p_inv[3] * d1);
      if (dist <= prm.merge_radius) cluster.push_back(i);
    }
    NaiveComponent merged;
    for (std::size_t i : cluster) merged.w += pool[i].w;
    for (std::size_t i : cluster) {
      merged.m[0] += pool[i].w / merged.w * pool[i].m[0];
      merged.m[1] += pool[i].w / merged.w * pool[i].m[1];
    }
    for (std::size_t i : cluster) {
      const double d0 = merged.m[0] - pool[i].m[0];
      const double d1 = merged.m[1] - pool[i].m[1];
      const double scale = pool[i].w / merged.w;
      merged.p[0] += scale * (pool[i].p[0] + d0 * d0);
      merged.p[1] += scale * (pool[i].p[1] + d0 * d1);
      merged.p[2] += scale * (pool[i].p[2] + d1 * d0);
      merged.p[3] += scale * (pool[i].p[3] + d1 * d1);
    }
    const double off = 0.5 * (merged.p[1] + merged.p[2]);
    merged.p[1] = off;
    merged.p[2] = off;
    merged_list.push_back(merged);
    for (std::size_t i : cluster) used[i] = true;
    remaining -= cluster.size();
  }
  std::sort(merged_list.begin(), merged_list.end(),
            [](const NaiveComponent& a, const NaiveComponent& b) {
              if (a.w != b.w) return a.w > b.w;
              return a.m[0] < b.m[0];
            });
  if (merged_list.size() > prm.max_components) merged_list.resize(prm.max_components);
  return merged_list;
}

struct NaiveExtraction {
  std::vector<std::pair<double, double>> states;
  std::size_t cardinality = 0;
};

inline NaiveExtraction naive_extract(const std::vector<NaiveComponent>& gm) {
  std::vector<const NaiveComponent*> order;
  for (const NaiveComponent& c : gm) order.push_back(&c);
  std::stable_sort(order.begin(), order.end(), [](const NaiveComponent* a,
                                                  const NaiveComponent* b) {
    if (a->w != b->w) return a->w > b->w;
    return a->m[0] < b->m[0];
  });
  double mass = 0.0;
  for (const NaiveComponent& c : gm) mass += c.w;
  NaiveExtraction ex;
  const long rounded = std::lround(mass);
  ex.cardinality = std::min<std::size_t>(static_cast<std::size_t>(std::max(rounded, 0L)),
                                         gm.size());
  for (std::size_t i = 0; i < ex.cardinality; ++i) {
    ex.states.emplace_back(order[i]->m[0], order[i]->m[1]);
  }
  return ex;
}

}  // namespace oracle
