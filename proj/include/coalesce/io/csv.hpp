#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "coalesce/dynamics.hpp"
#include "coalesce/io/format.hpp"
#include "coalesce/spectra.hpp"

namespace coalesce::io {

inline constexpr const char* kClusterCsvHeader =
    "kappa,cluster_id,re_lambda,im_lambda,alg_mult,geo_mult,phase_rigidity,class\n";

inline void append_cluster_row(std::ostringstream& os, double kappa, std::size_t id, const spectra::Cluster& c) {
  os << format_double(kappa) << ',' << id << ',' << format_double(c.representative.real()) << ','
     << format_double(c.representative.imag()) << ',' << c.algebraic << ',' << c.geometric << ','
     << format_double(c.min_phase_rigidity) << ',' << spectra::to_string(c.classification) << '\n';
}

/// One row per cluster of a single spectrum.
inline std::string spectrum_csv(const spectra::SpectralReport& rep, double kappa) {
  std::ostringstream os;
  os << kClusterCsvHeader;
  for (std::size_t i = 0; i < rep.clusters.size(); ++i) append_cluster_row(os, kappa, i, rep.clusters[i]);
  return os.str();
}

/// One row per (kappa, tracked cluster); failed rows carry class ERROR and empty numbers.
inline std::string scan_csv(const std::vector<spectra::ScanRow>& rows) {
  std::ostringstream os;
  os << kClusterCsvHeader;
  for (const auto& r : rows) {
    if (r.cluster)
      append_cluster_row(os, r.kappa, r.tracked_id, *r.cluster);
    else
      os << format_double(r.kappa) << ',' << r.tracked_id << ",,,,,,ERROR\n";
  }
  return os.str();
}

/// t,row,col,probability for every site of every snapshot.
inline std::string snapshots_csv(const dynamics::EvolutionTrace& trace, const std::vector<double>& times) {
  std::ostringstream os;
  os << "t,row,col,probability\n";
  for (const auto& s : trace.snapshots) {
    if (std::find(times.begin(), times.end(), s.t) == times.end()) continue;
    const auto& map = *s.state.site_map;
    for (std::size_t i = 0; i < s.probabilities.size(); ++i) {
      const auto [r, c] = map.coords(i);
      os << format_double(s.t) << ',' << r << ',' << c << ',' << format_double(s.probabilities[i]) << '\n';
    }
  }
  return os.str();
}

inline std::string fidelity_csv(const std::vector<std::pair<double, double>>& series) {
  std::ostringstream os;
  os << "t,F\n";
  for (const auto& [t, f] : series) os << format_double(t) << ',' << format_double(f) << '\n';
  return os.str();
}

}  // namespace coalesce::io
