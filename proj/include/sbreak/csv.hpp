#pragma once

#include <optional>
#include <string>

#include "sbreak/breakpoint.hpp"
#include "sbreak/dgp.hpp"
#include "sbreak/wald.hpp"

namespace sbreak::csv {

// Dataset files are comma-separated, header required, '.' decimal, no
// missing values. Datasets write as t,y[,x] with t = 1..n; readers accept
// any column layout via header names.
void write_dataset(const std::string& path, const dgp::Dataset& data);

dgp::Dataset read_dataset(const std::string& path, const std::string& y_col = "y",
                          const std::optional<std::string>& x_col = std::string("x"));

void write_rss_profile(const std::string& path, const std::vector<bp::RssPoint>& profile);

void write_wald_profile(const std::string& path, const wald::WaldScan& scan);

} // namespace sbreak::csv
