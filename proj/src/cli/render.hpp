#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

namespace tsq::cli {

enum class Format { Table, Csv, Json };

Format parse_format(const std::string& text);

// doc is either one flat object or an array of flat objects with identical
// keys. CSV numbers use 17 significant digits; JSON uses the shortest
// round-tripping representation.
void render(std::ostream& out, Format format, const nlohmann::ordered_json& doc);

}  // namespace tsq::cli
