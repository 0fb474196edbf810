#pragma once

#include <iosfwd>
#include <string>

#include "stltube/opt/model.hpp"

namespace stltube::opt {

/* Textual LP format (objective, subject-to, bounds, binaries sections).
 * Variables are written with canonical names x<index> so that importing an
 * exported file reproduces the model exactly, term by term. */
void export_lp(const OptModel& m, std::ostream& os);
void export_lp_file(const OptModel& m, const std::string& path);

OptModel import_lp(std::istream& is);
OptModel import_lp_file(const std::string& path);

}  // namespace stltube::opt
