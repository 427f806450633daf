#pragma once

#include <string>

#include "sumprod/cnf.hpp"
#include "sumprod/extract.hpp"
#include "sumprod/hindman.hpp"
#include "sumprod/search.hpp"
#include "sumprod/thickness.hpp"

namespace sumprod::report {

// Line-oriented "key: value" renderings. Byte-identical for identical
// results; every rendering starts with the report kind.

std::string render(const search::Certificate& c);
std::string render(const search::ThresholdReport& r);
std::string render(const extract::ExtractOutcome& o);
std::string render(const thick::Classification& c);
std::string render_structure(const std::optional<hindman::Structure>& s,
                             const model::Coloring& c);
std::string render_bistructure(const std::optional<hindman::BiStructure>& s,
                               const model::Coloring& c);
std::string render_bridge(const hindman::BridgePair& b);
std::string render_vdw(const std::optional<long long>& d);

std::string params_text(const model::ParamMap& params);

}  // namespace sumprod::report
