#pragma once

#include "intermarket/common.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace intermarket {

enum class SampleSplit { In, Out };

std::string_view split_name(SampleSplit s);
SampleSplit parse_split(std::string_view s);

/// Metric names in record order.
const std::vector<std::string>& metric_names();

struct EvalRecord {
  std::string model;
  std::string dataset;
  int replication = 0;
  SampleSplit split = SampleSplit::Out;
  std::string metric;
  double value = 0.0;

  bool operator==(const EvalRecord&) const = default;
};

struct RecordFile {
  /// Text of the leading `# key: value` comment lines, without the `# `.
  std::vector<std::string> comments;
  std::vector<EvalRecord> records;

  /// Value of the `config-hash` comment, or empty.
  std::string config_hash() const;
};

inline constexpr const char* kRecordsHeader = "model,dataset,replication,split,metric,value";

/// Writes comment lines, the header and the records. Values use the shortest
/// round-trip representation, so reading the file back is bit-exact.
void write_records(std::ostream& out, const RecordFile& file);
void write_records_file(const std::string& path, const RecordFile& file);

/// Throws MalformedRow on a bad line and EmptyRecords when no record is present.
RecordFile read_records(std::istream& in);
RecordFile read_records_file(const std::string& path);

}  // namespace intermarket
