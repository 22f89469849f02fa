#include "nlosd/gm_phd.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "nlosd/errors.hpp"

namespace nlosd {

double GaussianMixture::total_weight() const {
  double sum = 0.0;
  for (const GaussianComponent& c : components) sum += c.weight;
  return sum;
}

void PhdConfig::validate() const {
  if (survival_probability <= 0.0 || survival_probability > 1.0) {
    throw ConfigError("phd: survival_probability must be in (0, 1]");
  }
  if (detection_probability <= 0.0 || detection_probability > 1.0) {
    throw ConfigError("phd: detection_probability must be in (0, 1]");
  }
  if (clutter_intensity < 0.0) throw ConfigError("phd: clutter_intensity must be >= 0");
  if (birth_weight < 0.0) throw ConfigError("phd: birth_weight must be >= 0");
  if (merge_radius < 0.0) throw ConfigError("phd: merge_radius must be >= 0");
  if (prune_weight_threshold < 0.0) throw ConfigError("phd: prune_weight_threshold must be >= 0");
  if (max_components == 0) throw ConfigError("phd: max_components must be >= 1");
  if (process_noise_range_std <= 0.0 || process_noise_speed_std <= 0.0 ||
      measurement_noise_range_std <= 0.0 || measurement_noise_speed_std <= 0.0) {
    throw ConfigError("phd: noise standard deviations must be positive");
  }
}

GaussianMixture phd_predict(const GaussianMixture& gm, const PhdConfig& cfg) {
  const Eigen::Matrix2d f = cfg.transition();
  const Eigen::Matrix2d q = cfg.process_noise();
  GaussianMixture out;
  out.components.reserve(gm.size());
  for (const GaussianComponent& c : gm.components) {
    GaussianComponent p;
    p.weight = cfg.survival_probability * c.weight;
    p.mean = f * c.mean;
    p.covariance = symmetrize(q + f * c.covariance * f.transpose());
    out.components.push_back(p);
  }
  return out;
}

GaussianMixture phd_add_birth(const GaussianMixture& gm, std::span<const Peak> previous_scan,
                              const PhdConfig& cfg) {
  GaussianMixture out = gm;
  const Eigen::Matrix2d birth_cov = cfg.birth_covariance();
  for (const Peak& z : previous_scan) {
    GaussianComponent c;
    c.weight = cfg.birth_weight;
    c.mean = Eigen::Vector2d(z.range_m, z.speed_mps);
    c.covariance = birth_cov;
    out.components.push_back(c);
  }
  return out;
}

GaussianMixture phd_update(const GaussianMixture& gm, std::span<const Peak> measurements,
                           const PhdConfig& cfg) {
  const double p_d = cfg.detection_probability;
  const Eigen::Matrix2d r = cfg.measurement_noise();

  GaussianMixture out;
  out.components.reserve(gm.size() * (1 + measurements.size()));

  // Missed-detection copies.
  for (const GaussianComponent& c : gm.components) {
    GaussianComponent missed = c;
    missed.weight = (1.0 - p_d) * c.weight;
    out.components.push_back(missed);
  }

  if (measurements.empty() || gm.components.empty()) return out;

  // Per-component Kalman quantities, shared across measurements.
  struct Updater {
    Eigen::Matrix2d s_inv;
    Eigen::Matrix2d gain;
    Eigen::Matrix2d posterior_cov;
    double norm_const;  // 1 / (2 pi sqrt(det S))
  };
  std::vector<Updater> updaters(gm.size());
  for (std::size_t j = 0; j < gm.size(); ++j) {
    const Eigen::Matrix2d s = gm.components[j].covariance + r;
    Updater& u = updaters[j];
    u.s_inv = s.inverse();
    u.gain = gm.components[j].covariance * u.s_inv;
    u.posterior_cov =
        symmetrize((Eigen::Matrix2d::Identity() - u.gain) * gm.components[j].covariance);
    u.norm_const = 1.0 / (2.0 * std::numbers::pi * std::sqrt(s.determinant()));
  }

  for (const Peak& peak : measurements) {
    const Eigen::Vector2d z(peak.range_m, peak.speed_mps);
    std::vector<GaussianComponent> updated(gm.size());
    double normalizer = cfg.clutter_intensity;
    for (std::size_t j = 0; j < gm.size(); ++j) {
      const GaussianComponent& c = gm.components[j];
      const Updater& u = updaters[j];
      const Eigen::Vector2d innovation = z - c.mean;
      const double q_z =
          u.norm_const * std::exp(-0.5 * innovation.dot(u.s_inv * innovation));
      updated[j].weight = p_d * c.weight * q_z;
      updated[j].mean = c.mean + u.gain * innovation;
      updated[j].covariance = u.posterior_cov;
      normalizer += updated[j].weight;
    }
    if (normalizer <= 0.0) continue;  // no component sees this measurement
    for (GaussianComponent& c : updated) {
      c.weight /= normalizer;
      out.components.push_back(c);
    }
  }
  return out;
}

GaussianMixture phd_prune_merge(const GaussianMixture& gm, const PhdConfig& cfg) {
  std::vector<GaussianComponent> pool;
  pool.reserve(gm.size());
  for (const GaussianComponent& c : gm.components) {
    if (c.weight >= cfg.prune_weight_threshold && c.weight > 0.0) pool.push_back(c);
  }

  GaussianMixture out;
  std::vector<char> used(pool.size(), 0);
  std::size_t remaining = pool.size();
  while (remaining > 0) {
    // Dominant component of the current pool.
    std::size_t best = 0;
    double best_weight = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!used[i] && pool[i].weight > best_weight) {
        best_weight = pool[i].weight;
        best = i;
      }
    }

    // Cluster: everything within the merge radius of the dominant mean,
    // measured in each candidate's own covariance.
    std::vector<std::size_t> cluster;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      if (i == best) {
        cluster.push_back(i);
        continue;
      }
      const Eigen::Vector2d d = pool[i].mean - pool[best].mean;
      const double dist2 = d.dot(pool[i].covariance.inverse() * d);
      if (dist2 <= cfg.merge_radius) cluster.push_back(i);
    }

    // Moment-matched merge preserves the cluster weight.
    GaussianComponent merged;
    for (std::size_t i : cluster) merged.weight += pool[i].weight;
    for (std::size_t i : cluster) merged.mean += (pool[i].weight / merged.weight) * pool[i].mean;
    for (std::size_t i : cluster) {
      const Eigen::Vector2d d = merged.mean - pool[i].mean;
      merged.covariance +=
          (pool[i].weight / merged.weight) * (pool[i].covariance + d * d.transpose());
    }
    merged.covariance = symmetrize(merged.covariance);
    out.components.push_back(merged);

    for (std::size_t i : cluster) used[i] = 1;
    remaining -= cluster.size();
  }

  std::sort(out.components.begin(), out.components.end(),
            [](const GaussianComponent& a, const GaussianComponent& b) {
              if (a.weight != b.weight) return a.weight > b.weight;
              return a.mean(0) < b.mean(0);
            });
  if (out.components.size() > cfg.max_components) {
    out.components.resize(cfg.max_components);
  }
  return out;
}

PhdExtraction phd_extract(const GaussianMixture& gm) {
  std::vector<const GaussianComponent*> order;
  order.reserve(gm.size());
  for (const GaussianComponent& c : gm.components) order.push_back(&c);
  std::stable_sort(order.begin(), order.end(),
                   [](const GaussianComponent* a, const GaussianComponent* b) {
                     if (a->weight != b->weight) return a->weight > b->weight;
                     return a->mean(0) < b->mean(0);
                   });

  PhdExtraction extraction;
  const double mass = gm.total_weight();
  const long rounded = std::lround(mass);
  const std::size_t cardinality =
      std::min(static_cast<std::size_t>(std::max(rounded, 0L)), gm.size());
  extraction.cardinality = cardinality;
  for (std::size_t i = 0; i < cardinality; ++i) {
    extraction.states.push_back(order[i]->mean);
  }
  return extraction;
}

GmPhdFilter::GmPhdFilter(const PhdConfig& cfg) : cfg_(cfg) { cfg_.validate(); }

void GmPhdFilter::reset() {
  gm_.components.clear();
  previous_scan_.clear();
  alarm_latched_ = false;
}

PhdStepResult GmPhdFilter::step(std::span<const Peak> peaks) {
  GaussianMixture gm = phd_predict(gm_, cfg_);
  gm = phd_add_birth(gm, previous_scan_, cfg_);
  gm = phd_update(gm, peaks, cfg_);
  gm_ = phd_prune_merge(gm, cfg_);
  previous_scan_.assign(peaks.begin(), peaks.end());

  PhdStepResult result;
  result.extraction = phd_extract(gm_);
  result.total_weight = gm_.total_weight();
  if (result.extraction.cardinality >= 1) alarm_latched_ = true;
  result.intruder_present = alarm_latched_;
  return result;
}

void write_phd_estimates_csv(const std::string& path,
                             const std::vector<PhdExtraction>& per_frame) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open '" + path + "' for writing");
  // Rows are ragged: cardinality (range, speed) pairs follow the two fixed
  // columns.
  out << "frame_index,cardinality\n";
  for (std::size_t i = 0; i < per_frame.size(); ++i) {
    out << i << ',' << per_frame[i].cardinality;
    for (const Eigen::Vector2d& s : per_frame[i].states) {
      out << ',' << s(0) << ',' << s(1);
    }
    out << "\n";
  }
  if (!out) throw FormatError("write failure on '" + path + "'");
}

}  // namespace nlosd
