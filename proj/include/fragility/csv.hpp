#pragma once

#include <string>
#include <vector>

#include "fragility/im_distribution.hpp"
#include "fragility/mcmc.hpp"
#include "fragility/metrics.hpp"
#include "fragility/mle.hpp"
#include "fragility/probit_model.hpp"
#include "fragility/reference.hpp"

namespace fragility {

// CSV schemas used by the CLI. Lines starting with '#' are comments
// (provenance headers); all floating-point output uses 17 significant
// digits so re-runs are byte-identical.

// header `im`, one positive decimal per row
IMSample read_im_csv(const std::string& path);
void write_im_csv(const IMSample& sample, const std::string& path,
                  const std::vector<std::string>& comments = {});

// header `im,failure`
Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const Dataset& data, const std::string& path,
                       const std::vector<std::string>& comments = {});

// header `alpha,beta,log_post`
void write_chain_csv(const Chain& chain, const std::string& path);

// header `a,lower,median,upper`
void write_band_csv(const CurveBand& band, const std::string& path);

// header `alpha,beta,degenerate`
void write_bootstrap_csv(const std::vector<MleResult>& fits,
                         const std::string& path);

// header `centroid,rate,ci_low,ci_high,n`
void write_mc_curve_csv(const McCurve& curve, const std::string& path);

// header `k,method,metric,mean,lo,hi,n_excluded`
void write_replication_csv(const ReplicationSummary& summary,
                           const std::string& path);

std::string format_double(double v);

}  // namespace fragility
