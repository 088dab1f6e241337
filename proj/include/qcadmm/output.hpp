#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcadmm/consensus.hpp"
#include "qcadmm/experiment.hpp"

namespace qcadmm {

namespace detail {

inline std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace detail

inline std::string rows_to_csv(const std::vector<ExperimentRow>& rows, ExperimentKind kind) {
  std::ostringstream os;
  os << "kind,graph,n,e,delta,algorithm,trials,converged,cyclic,capped,"
        "mean_error,max_error,mean_time,mean_time_adjusted,bound,within_bound\n";
  for (const auto& r : rows) {
    os << to_string(kind) << ',' << to_string(r.point.family) << ',' << r.point.n << ','
       << r.point.e << ',' << detail::fmt_double(r.point.delta) << ',' << to_string(r.algorithm)
       << ',' << r.trials << ',' << r.converged << ',' << r.cyclic << ',' << r.capped << ','
       << detail::fmt_double(r.mean_error) << ',' << detail::fmt_double(r.max_error) << ','
       << detail::fmt_double(r.mean_time) << ',' << detail::fmt_double(r.mean_time_adjusted)
       << ',' << detail::fmt_double(r.bound) << ',' << r.within_bound << '\n';
  }
  return os.str();
}

inline nlohmann::json rows_to_json(const std::vector<ExperimentRow>& rows, ExperimentKind kind) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"kind", to_string(kind)},
                   {"graph", to_string(r.point.family)},
                   {"n", r.point.n},
                   {"e", r.point.e},
                   {"delta", r.point.delta},
                   {"algorithm", to_string(r.algorithm)},
                   {"trials", r.trials},
                   {"converged", r.converged},
                   {"cyclic", r.cyclic},
                   {"capped", r.capped},
                   {"mean_error", r.mean_error},
                   {"max_error", r.max_error},
                   {"mean_time", r.mean_time},
                   {"mean_time_adjusted", r.mean_time_adjusted},
                   {"bound", r.bound},
                   {"within_bound", r.within_bound}});
  }
  return arr;
}

inline GraphFamily family_from_string(const std::string& s) {
  if (s == "random") return GraphFamily::random_connected;
  if (s == "star") return GraphFamily::star;
  if (s == "complete") return GraphFamily::complete;
  throw std::invalid_argument("unknown graph family: " + s);
}

inline std::vector<ExperimentRow> rows_from_json(const nlohmann::json& arr) {
  std::vector<ExperimentRow> rows;
  for (const auto& j : arr) {
    ExperimentRow r;
    r.point.family = family_from_string(j.at("graph").get<std::string>());
    r.point.n = j.at("n").get<int>();
    r.point.e = j.at("e").get<long>();
    r.point.delta = j.at("delta").get<double>();
    r.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    r.trials = j.at("trials").get<int>();
    r.converged = j.at("converged").get<long>();
    r.cyclic = j.at("cyclic").get<long>();
    r.capped = j.at("capped").get<long>();
    r.mean_error = j.at("mean_error").get<double>();
    r.max_error = j.at("max_error").get<double>();
    r.mean_time = j.at("mean_time").get<double>();
    r.mean_time_adjusted = j.at("mean_time_adjusted").get<double>();
    r.bound = j.at("bound").get<double>();
    r.within_bound = j.at("within_bound").get<long>();
    rows.push_back(r);
  }
  return rows;
}

// Companion matplotlib script reading the emitted CSV by column name, so the
// sweep can be plotted without re-running anything.
inline std::string plot_script_for(const std::string& csv_path, ExperimentKind kind) {
  std::ostringstream os;
  os << "import matplotlib\nmatplotlib.use(\"Agg\")\n"
     << "import matplotlib.pyplot as plt\nimport pandas as pd\n\n"
     << "df = pd.read_csv(" << nlohmann::json(csv_path).dump() << ")\n";
  const char* x = "e";
  if (kind == ExperimentKind::sweep_nodes || kind == ExperimentKind::sweep_avg_degree ||
      kind == ExperimentKind::cycle_count)
    x = "n";
  else if (kind == ExperimentKind::delta_sweep)
    x = "delta";
  os << "x = \"" << x << "\"\n"
     << "fig, axes = plt.subplots(1, 2, figsize=(11, 4))\n"
     << "for algo, sub in df.groupby(\"algorithm\"):\n"
     << "    axes[0].plot(sub[x], sub[\"mean_error\"], marker=\"o\", label=algo)\n"
     << "    axes[1].plot(sub[x], sub[\"mean_time_adjusted\"], marker=\"o\", label=algo)\n"
     << "axes[0].set_xlabel(x); axes[0].set_ylabel(\"mean consensus error\")\n"
     << "axes[1].set_xlabel(x); axes[1].set_ylabel(\"mean convergence time\")\n"
     << "for ax in axes:\n    ax.legend(); ax.grid(True, alpha=0.3)\n"
     << "plt.tight_layout()\n"
     << "plt.savefig(" << nlohmann::json(csv_path + ".png").dump() << ", dpi=130)\n"
     << "print(\"wrote " << csv_path << ".png\")\n";
  return os.str();
}

// Writes the aggregate table (csv or json) plus, for csv, a plot-script
// companion next to it.
inline void emit_outputs(const std::vector<ExperimentRow>& rows, ExperimentKind kind,
                         const std::string& format, const std::string& path) {
  if (format == "csv") {
    detail::write_file(path, rows_to_csv(rows, kind));
    detail::write_file(path + "_plot.py", plot_script_for(path, kind));
  } else if (format == "json") {
    detail::write_file(path, rows_to_json(rows, kind).dump(2) + "\n");
  } else {
    throw std::invalid_argument("unknown output format: " + format);
  }
}

// Single-run artifacts -------------------------------------------------

inline nlohmann::json run_result_to_json(const RunResult& res) {
  nlohmann::json j;
  j["outcome"] = res.outcome == Outcome::converged ? "converged"
                 : res.outcome == Outcome::cyclic  ? "cyclic"
                                                   : "iteration_capped";
  j["k0"] = res.k0;
  if (res.outcome == Outcome::cyclic) j["period"] = res.period;
  j["consensus_error"] = res.consensus_error;
  j["bound"] = res.bound;
  j["within_bound"] = res.within_bound;
  if (res.outcome != Outcome::iteration_capped) j["x_star"] = res.x_star;
  if (res.stage1_iterations > 0) j["stage1_iterations"] = res.stage1_iterations;
  if (!res.exact_encoding) j["exact_encoding"] = false;
  return j;
}

inline std::string trace_to_csv(const std::vector<double>& errors,
                                const std::vector<Vec>& quantized) {
  if (errors.size() != quantized.size())
    throw std::invalid_argument("trace_to_csv: mismatched trace lengths");
  std::ostringstream os;
  os << "k,iterative_error";
  const std::size_t n = quantized.empty() ? 0 : quantized[0].size();
  for (std::size_t i = 0; i < n; ++i) os << ",node_" << i;
  os << '\n';
  for (std::size_t k = 0; k < errors.size(); ++k) {
    os << k << ',' << detail::fmt_double(errors[k]);
    for (double v : quantized[k]) os << ',' << detail::fmt_double(v);
    os << '\n';
  }
  return os.str();
}

}  // namespace qcadmm
