#include "fragility/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fragility {

namespace {

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

// First non-comment line.
std::string read_header(std::ifstream& in, const std::string& path) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') return line;
  }
  throw std::runtime_error("missing header in " + path);
}

std::vector<std::string> split_comma(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

IMSample read_im_csv(const std::string& path) {
  auto in = open_in(path);
  if (read_header(in, path) != "im") {
    throw std::runtime_error(path + ": expected header `im`");
  }
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    values.push_back(std::stod(line));
  }
  IMSample sample;
  sample.values = Eigen::Map<const Eigen::VectorXd>(
      values.data(), static_cast<Eigen::Index>(values.size()));
  validate_sample(sample);
  return sample;
}

void write_im_csv(const IMSample& sample, const std::string& path,
                  const std::vector<std::string>& comments) {
  auto out = open_out(path);
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "im\n";
  for (Eigen::Index i = 0; i < sample.values.size(); ++i) {
    out << format_double(sample.values[i]) << '\n';
  }
  finish(out, path);
}

Dataset read_dataset_csv(const std::string& path) {
  auto in = open_in(path);
  if (read_header(in, path) != "im,failure") {
    throw std::runtime_error(path + ": expected header `im,failure`");
  }
  Dataset data;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_comma(line);
    if (fields.size() != 2) {
      throw std::runtime_error(path + ": malformed row: " + line);
    }
    const double im = std::stod(fields[0]);
    const int z = std::stoi(fields[1]);
    if (!(im > 0.0) || (z != 0 && z != 1)) {
      throw std::runtime_error(path + ": invalid row: " + line);
    }
    data.observations.push_back({im, z == 1});
  }
  if (data.empty()) throw std::runtime_error(path + ": no observations");
  return data;
}

void write_dataset_csv(const Dataset& data, const std::string& path,
                       const std::vector<std::string>& comments) {
  auto out = open_out(path);
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "im,failure\n";
  for (const auto& o : data.observations) {
    out << format_double(o.im) << ',' << (o.failed ? 1 : 0) << '\n';
  }
  finish(out, path);
}

void write_chain_csv(const Chain& chain, const std::string& path) {
  auto out = open_out(path);
  out << "alpha,beta,log_post\n";
  for (std::size_t i = 0; i < chain.samples.size(); ++i) {
    out << format_double(chain.samples[i].alpha) << ','
        << format_double(chain.samples[i].beta) << ','
        << format_double(chain.log_target[i]) << '\n';
  }
  finish(out, path);
}

void write_band_csv(const CurveBand& band, const std::string& path) {
  auto out = open_out(path);
  out << "a,lower,median,upper\n";
  for (std::size_t i = 0; i < band.a_grid.size(); ++i) {
    out << format_double(band.a_grid[i]) << ',' << format_double(band.lower[i])
        << ',' << format_double(band.median[i]) << ','
        << format_double(band.upper[i]) << '\n';
  }
  finish(out, path);
}

void write_bootstrap_csv(const std::vector<MleResult>& fits,
                         const std::string& path) {
  auto out = open_out(path);
  out << "alpha,beta,degenerate\n";
  for (const auto& fit : fits) {
    const double alpha = fit.theta_hat ? fit.theta_hat->alpha : 0.0;
    const double beta = fit.theta_hat ? fit.theta_hat->beta : 0.0;
    out << format_double(alpha) << ',' << format_double(beta) << ','
        << (fit.degenerate ? 1 : 0) << '\n';
  }
  finish(out, path);
}

void write_mc_curve_csv(const McCurve& curve, const std::string& path) {
  auto out = open_out(path);
  out << "centroid,rate,ci_low,ci_high,n\n";
  for (std::size_t j = 0; j < curve.centroids.size(); ++j) {
    const double lo = curve.failure_rates[j] - curve.ci_half_widths[j];
    const double hi = curve.failure_rates[j] + curve.ci_half_widths[j];
    out << format_double(curve.centroids[j]) << ','
        << format_double(curve.failure_rates[j]) << ',' << format_double(lo)
        << ',' << format_double(hi) << ',' << curve.cluster_sizes[j] << '\n';
  }
  finish(out, path);
}

void write_replication_csv(const ReplicationSummary& summary,
                           const std::string& path) {
  auto out = open_out(path);
  out << "k,method,metric,mean,lo,hi,n_excluded\n";
  for (const auto& row : summary.rows) {
    out << row.k << ',' << method_name(row.method) << ',' << row.metric << ','
        << format_double(row.mean) << ',' << format_double(row.lo) << ','
        << format_double(row.hi) << ',' << row.n_excluded << '\n';
  }
  finish(out, path);
}

}  // namespace fragility
