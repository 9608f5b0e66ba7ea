#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "robincap/fem.hpp"
#include "robincap/shape.hpp"

// Seeded verification campaign: random admissible pairs (|K| = pi,
// |Omega| <= M), FEM energies, and the concentric-ball lower bound they are
// measured against. Instances are independent and may run in parallel; the
// report rows are ordered by seed regardless of scheduling.

namespace robincap {

struct CampaignOptions {
  ProblemParams params{2, 2.0, 1.0};
  double M = 4.0 * M_PI;
  int count = 10;
  std::uint64_t seed = 1;
  double amplitude = 0.15;
  int mesh_theta = 256;
  int mesh_radial = 32;
  int threads = 0;  // 0: hardware concurrency, capped by PCAP_THREADS
};

struct InstanceRecord {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  double area_K = 0.0;
  double area_Omega = 0.0;
  double fem_energy = 0.0;
  double ball_bound = 0.0;
  double margin = 0.0;  // fem_energy - ball_bound
  double centroid_drift = 0.0;
};

struct CampaignReport {
  CampaignOptions options;
  double ball_bound = 0.0;     // shared by all instances (same M)
  bool hypothesis_met = true;  // beta^{1/(p-1)} > (n-p)/(p-1)
  std::vector<InstanceRecord> records;
  double min_margin = 0.0;
  int violations = 0;  // fem_energy < ball_bound * (1 - 2e-2)
  int failures = 0;    // instances that threw
};

CampaignReport run_campaign(const CampaignOptions& options);

/// CSV emission: header row, one row per instance ordered by seed, summary
/// comment lines, and a trailing status line.
void write_campaign_csv(std::ostream& out, const CampaignReport& report);

/// Parallelism cap honoring the PCAP_THREADS environment variable.
int campaign_thread_count(int requested, int instance_count);

}  // namespace robincap
