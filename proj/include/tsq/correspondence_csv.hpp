#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tsq/fitting.hpp"

namespace tsq {

// Header "mean,beta,rho,q", one record per line, every value printed with
// 17 significant digits so that parse(write(x)) == x bit for bit.
inline constexpr const char* kCorrespondenceHeader = "mean,beta,rho,q";

std::string format_number(double value);

void write_correspondence_csv(std::ostream& out, std::span<const CorrespondenceRecord> records);

// Throws MalformedInput naming the offending line; a file without data rows
// is malformed.
std::vector<CorrespondenceRecord> read_correspondence_csv(std::istream& in);
std::vector<CorrespondenceRecord> read_correspondence_csv_file(const std::string& path);

}  // namespace tsq
