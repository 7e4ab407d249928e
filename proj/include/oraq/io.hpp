#ifndef ORAQ_IO_HPP
#define ORAQ_IO_HPP

#include <iosfwd>
#include <string>

#include "oraq/core.hpp"

namespace oraq {

// Dataset file: UTF-8 CSV with header `id,proxy_dist[,oracle_dist]`.
// Ids are unique non-negative integers; floats use `.` as decimal point.
Dataset load_dataset(const std::string& path);
Dataset read_dataset(std::istream& in, const std::string& context);

// Writes rows in proxy-rank order; doubles round-trip exactly.
void save_dataset(const std::string& path, const Dataset& ds);
void write_dataset(std::ostream& out, const Dataset& ds);

}  // namespace oraq

#endif  // ORAQ_IO_HPP
