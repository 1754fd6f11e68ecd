#include "intermarket/records.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace intermarket {

std::string_view split_name(SampleSplit s) { return s == SampleSplit::In ? "in" : "out"; }

SampleSplit parse_split(std::string_view s) {
  if (s == "in") return SampleSplit::In;
  if (s == "out") return SampleSplit::Out;
  throw Error(ErrorCode::MalformedRow, "unknown sample split: " + std::string(s));
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{"accuracy", "macro_f1", "weighted_f1", "auc"};
  return names;
}

std::string RecordFile::config_hash() const {
  constexpr std::string_view key = "config-hash: ";
  for (const auto& c : comments) {
    if (c.rfind(key, 0) == 0) return c.substr(key.size());
  }
  return {};
}

void write_records(std::ostream& out, const RecordFile& file) {
  for (const auto& c : file.comments) out << "# " << c << '\n';
  out << kRecordsHeader << '\n';
  for (const auto& r : file.records) {
    out << r.model << ',' << r.dataset << ',' << r.replication << ',' << split_name(r.split) << ',' << r.metric
        << ',' << format_double(r.value) << '\n';
  }
}

void write_records_file(const std::string& path, const RecordFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  write_records(out, file);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

RecordFile read_records(std::istream& in) {
  RecordFile file;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      file.comments.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    if (!header_seen) {
      if (line != kRecordsHeader) throw Error(ErrorCode::MalformedRow, "unexpected records header: " + line);
      header_seen = true;
      continue;
    }
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (std::size_t pos; (pos = rest.find(',')) != std::string_view::npos; rest.remove_prefix(pos + 1)) {
      fields.push_back(rest.substr(0, pos));
    }
    fields.push_back(rest);
    const auto where = " at line " + std::to_string(line_no);
    if (fields.size() != 6) throw Error(ErrorCode::MalformedRow, "expected 6 fields" + where);
    EvalRecord r;
    r.model = fields[0];
    r.dataset = fields[1];
    const auto [ptr, ec] = std::from_chars(fields[2].data(), fields[2].data() + fields[2].size(), r.replication);
    if (ec != std::errc{} || ptr != fields[2].data() + fields[2].size()) {
      throw Error(ErrorCode::MalformedRow, "bad replication" + where);
    }
    r.split = parse_split(fields[3]);
    r.metric = fields[4];
    r.value = parse_double(fields[5]);
    file.records.push_back(std::move(r));
  }
  if (file.records.empty()) throw Error(ErrorCode::EmptyRecords, "no evaluation records");
  return file;
}

RecordFile read_records_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  return read_records(in);
}

}  // namespace intermarket
