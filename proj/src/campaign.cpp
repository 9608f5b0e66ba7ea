#include "robincap/campaign.hpp"

#include <atomic>
#include <cstdlib>
#include <limits>
#include <thread>

#include "robincap/csv.hpp"
#include "robincap/hfunction.hpp"
#include "robincap/mesh.hpp"

namespace robincap {

int campaign_thread_count(int requested, int instance_count) {
  int threads = requested > 0
                    ? requested
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (const char* cap = std::getenv("PCAP_THREADS")) {
    const int limit = std::atoi(cap);
    if (limit >= 1) threads = std::min(threads, limit);
  }
  return std::max(1, std::min(threads, instance_count));
}

namespace {

InstanceRecord run_instance(const CampaignOptions& options,
                            std::uint64_t seed, double ball_bound) {
  InstanceRecord rec;
  rec.seed = seed;
  rec.ball_bound = ball_bound;
  try {
    const ShapePair pair =
        sample_random_pair(seed, options.M, options.amplitude);
    rec.area_K = area(pair.K);
    rec.area_Omega = area(pair.Omega);
    const AnnularMesh mesh =
        build_annular_mesh(pair, options.mesh_theta, options.mesh_radial);
    const FemSolution sol = solve(mesh, options.params);
    rec.fem_energy = sol.energy_total;
    rec.margin = rec.fem_energy - ball_bound;
    rec.centroid_drift = centroid_drift(sol);
    rec.ok = true;
  } catch (const std::exception& err) {
    rec.error = err.what();
  }
  return rec;
}

}  // namespace

CampaignReport run_campaign(const CampaignOptions& options) {
  CampaignReport report;
  report.options = options;
  report.ball_bound = ball_lower_bound(options.params, options.M).energy;
  report.hypothesis_met =
      options.params.robin_root() >
      (options.params.n - options.params.p) / (options.params.p - 1.0);

  report.records.resize(options.count);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < options.count; i = next.fetch_add(1))
      report.records[i] =
          run_instance(options, options.seed + i, report.ball_bound);
  };

  const int threads = campaign_thread_count(options.threads, options.count);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  report.min_margin = std::numeric_limits<double>::infinity();
  for (const InstanceRecord& rec : report.records) {
    if (!rec.ok) {
      ++report.failures;
      continue;
    }
    report.min_margin = std::min(report.min_margin, rec.margin);
    if (rec.fem_energy < report.ball_bound * (1.0 - 2e-2)) ++report.violations;
  }
  if (!std::isfinite(report.min_margin)) report.min_margin = 0.0;
  return report;
}

void write_campaign_csv(std::ostream& out, const CampaignReport& report) {
  out << "seed,area_K,area_Omega,fem_energy,ball_bound,margin,centroid_drift,"
         "status\n";
  for (const InstanceRecord& rec : report.records) {
    if (rec.ok) {
      out << rec.seed << ',' << csv_number(rec.area_K) << ','
          << csv_number(rec.area_Omega) << ',' << csv_number(rec.fem_energy)
          << ',' << csv_number(rec.ball_bound) << ',' << csv_number(rec.margin)
          << ',' << csv_number(rec.centroid_drift) << ",ok\n";
    } else {
      out << rec.seed << ",,,,,,,failed\n";
    }
  }
  out << "# min_margin," << csv_number(report.min_margin) << "\n";
  out << "# violations," << report.violations << "\n";
  out << "# failures," << report.failures << "\n";
  out << "# status: " << (report.failures == 0 ? "ok" : "partial") << "\n";
}

}  // namespace robincap
