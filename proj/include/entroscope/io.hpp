#pragma once

#include <filesystem>
#include <string>

#include "entroscope/entropy.hpp"
#include "entroscope/lab.hpp"
#include "entroscope/plmap.hpp"

namespace entroscope::io {

/// On-disk form of a map: domain endpoints and breakpoints as exact
/// rational strings ("p/q"), plus optional free-form metadata. Decimal
/// input is converted exactly in base ten.
struct MapDocument {
    PLMap map;
    std::string metadata;
};

std::string to_json(const MapDocument& doc);
MapDocument map_document_from_json(const std::string& text);
MapDocument load_map(const std::filesystem::path& path);
void save_map(const std::filesystem::path& path, const MapDocument& doc);

std::string estimate_to_text(const EntropyEstimate& est, bool base2 = false);
std::string estimate_to_json(const EntropyEstimate& est, bool base2 = false);
std::string estimate_to_csv(const EntropyEstimate& est, bool base2 = false);

std::string report_to_text(const VerificationReport& report);
std::string report_to_json(const VerificationReport& report);

/// Static 512x512 picture of the graph over the unit square.
std::string map_to_svg(const PLMap& f);

std::string method_name(Method m);
std::string status_name(CheckStatus s);

}  // namespace entroscope::io
