#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "classdiv/theorems.hpp"

namespace classdiv::report {

inline constexpr char const * schema_id = "classdiv-report/1";

struct ReportDocument
{
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<theorems::VerificationReport> results;
    /* Scan-only counters; absent for single verifications. */
    std::optional<theorems::ScanSummary> scan_summary;
    std::optional<double> elapsed_seconds;
};

/* Integers that fit in 64 bits become JSON numbers, larger ones decimal strings. */
nlohmann::ordered_json integer_json(BigInt const & v);

nlohmann::ordered_json to_json(theorems::VerificationReport const & r);
nlohmann::ordered_json to_json(ReportDocument const & doc);

std::string render_json(ReportDocument const & doc);
/* Header plus one row per result. */
std::string render_csv(ReportDocument const & doc);
std::string render_text(ReportDocument const & doc);

/* 1 if any result failed, else 3 if any hit a resource limit, else 0. */
int exit_code(ReportDocument const & doc);

} // namespace classdiv::report
