#pragma once

#include <string>

#include <json.hpp>

#include "pir/converse.hpp"
#include "pir/pattern.hpp"
#include "pir/scheme.hpp"
#include "pir/sim.hpp"

namespace pir::io {

// All emitted documents carry "format_version": 1. Databases, sets and
// positions are 1-based in serialized form; rationals are strings like "8/3".

inline constexpr int kFormatVersion = 1;

nlohmann::json pattern_to_json(const pattern::CollusionPattern& p);
pattern::CollusionPattern pattern_from_json(const nlohmann::json& j);

nlohmann::json plan_to_json(const scheme::SchemePlan& plan, bool full = false);
scheme::SchemePlan plan_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const converse::Certificate& c);
converse::Certificate certificate_from_json(const nlohmann::json& j);

nlohmann::json transcript_to_json(const sim::Transcript& t);

nlohmann::json messages_to_json(uint32_t q, const std::vector<std::vector<uint32_t>>& w);
std::vector<std::vector<uint32_t>> messages_from_json(const nlohmann::json& j, uint32_t expect_q,
                                                      long long expect_len);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace pir::io
