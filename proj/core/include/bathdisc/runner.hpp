#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bathdisc/bcf.hpp"
#include "bathdisc/config.hpp"
#include "bathdisc/discretize.hpp"

namespace bathdisc {

struct MethodOutcome {
  std::string name; // "id", "ld", "mdm", "bsdo[-250,250]"
  std::optional<DiscreteBath> bath;
  std::optional<BcfSeries> bcf;
  std::optional<ErrorReport> report;
  std::string error; // nonempty on failure
};

struct ComparisonBundle {
  BcfSeries reference;
  std::vector<MethodOutcome> methods;
};

// Builds the bath for cfg.method (not "all"), writes modes CSV + JSON.
DiscreteBath run_discretize(const RunConfig& cfg);

// Oracle BCF on the verification grid; writes bcf_reference.csv.
BcfSeries run_bcf(const RunConfig& cfg);

// Reference plus every requested method's bath, reconstructed BCF, and error
// report; one CSV per panel (re, im, normalized error) plus a summary. A
// failing method is recorded and the run continues.
ComparisonBundle run_compare(const RunConfig& cfg);

// Chain coefficients on the BSDO interval; writes chain.csv.
ChainCoefficients run_chain(const RunConfig& cfg);

} // namespace bathdisc
