// Copyright 2026 The HavenMatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "havenmatch/instance_io.h"

#include <openssl/evp.h>

#include <boost/tokenizer.hpp>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace havenmatch {

std::string CanonicalInstanceJson(const Instance& instance) {
  // nlohmann::json objects are std::map backed, so keys come out sorted.
  return Json(instance).dump();
}

std::string InstanceDigest(const Instance& instance) {
  const std::string bytes = CanonicalInstanceJson(instance);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::kIoError, "sha256 digest failed");
  }
  std::ostringstream os;
  os << "sha256:" << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) os << std::setw(2) << int{md[i]};
  return os.str();
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  }
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) {
    throw Error(ErrorCode::kIoError, "error reading '" + path.string() + "'");
  }
  return os.str();
}

InstanceDocument LoadDocument(const std::filesystem::path& path) {
  InstanceDocument doc = ParseInstanceDocument(ReadFile(path));
  RequireValidInstance(doc.instance);
  return doc;
}

Instance LoadInstance(const std::filesystem::path& path) {
  return LoadDocument(path).instance;
}

void SaveDocument(const std::filesystem::path& path,
                  const InstanceDocument& doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIoError,
                "cannot open '" + path.string() + "' for writing");
  }
  out << Json(doc).dump(2) << '\n';
  if (!out.flush()) {
    throw Error(ErrorCode::kIoError, "error writing '" + path.string() + "'");
  }
}

namespace {

using Row = std::vector<std::string>;

struct CsvTable {
  std::vector<std::pair<std::size_t, Row>> rows;  // (line, fields)
};

CsvTable ParseCsv(const std::string& name, const std::string& text,
                  const Row& expected_header) {
  using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      Row header;
      try {
        Tokenizer tok(line);
        header.assign(tok.begin(), tok.end());
      } catch (const boost::escaped_list_error& e) {
        throw Error(ErrorCode::kHeaderMismatch,
                    name + ": unreadable header: " + e.what());
      }
      if (header != expected_header) {
        std::string want;
        for (const std::string& h : expected_header) {
          want += (want.empty() ? "" : ",") + h;
        }
        throw Error(ErrorCode::kHeaderMismatch,
                    name + ": header must be exactly '" + want + "'");
      }
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    Row fields;
    try {
      Tokenizer tok(line);
      fields.assign(tok.begin(), tok.end());
    } catch (const boost::escaped_list_error& e) {
      throw RowError(name, line_no, e.what());
    }
    if (fields.size() != expected_header.size()) {
      throw RowError(name, line_no,
                     "expected " + std::to_string(expected_header.size()) +
                         " fields, found " + std::to_string(fields.size()));
    }
    table.rows.emplace_back(line_no, std::move(fields));
  }
  if (!header_seen) {
    throw Error(ErrorCode::kHeaderMismatch, name + ": missing header row");
  }
  return table;
}

template <typename T>
T ParseNumber(const std::string& name, std::size_t line,
              const std::string& field, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw RowError(name, line, "field '" + field + "' is not a number: '" +
                                   text + "'");
  }
  return value;
}

std::vector<OptionId> SplitPreferences(const std::string& cell) {
  std::vector<OptionId> out;
  if (cell.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t bar = cell.find('|', start);
    out.emplace_back(cell.substr(start, bar - start));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return out;
}

}  // namespace

InstanceDocument ImportCsvText(const std::string& agents_csv,
                               const std::string& options_csv,
                               const std::string& providers_csv) {
  InstanceDocument doc;

  for (auto& [line, f] :
       ParseCsv("providers.csv", providers_csv, {"id", "locality"}).rows) {
    doc.instance.providers.push_back(Provider{ProviderId(f[0]), f[1]});
  }
  for (auto& [line, f] :
       ParseCsv("options.csv", options_csv, {"id", "provider"}).rows) {
    doc.instance.options.push_back(
        HousingOption{OptionId(f[0]), ProviderId(f[1]), {}});
  }
  const Row agent_header = {"id",          "locality",       "current_option",
                            "family_size", "health_risk",    "wait_time_days",
                            "preferences"};
  for (auto& [line, f] : ParseCsv("agents.csv", agents_csv, agent_header).rows) {
    Agent a;
    a.id = AgentId(f[0]);
    a.locality = f[1];
    if (!f[2].empty()) a.current_option = OptionId(f[2]);
    a.criteria.family_size =
        ParseNumber<std::int64_t>("agents.csv", line, "family_size", f[3]);
    a.criteria.health_risk =
        ParseNumber<double>("agents.csv", line, "health_risk", f[4]);
    a.criteria.wait_time_days =
        ParseNumber<std::int64_t>("agents.csv", line, "wait_time_days", f[5]);
    a.preferences = SplitPreferences(f[6]);
    doc.instance.agents.push_back(std::move(a));
  }
  return doc;
}

InstanceDocument ImportCsv(const std::filesystem::path& agents_csv,
                           const std::filesystem::path& options_csv,
                           const std::filesystem::path& providers_csv) {
  return ImportCsvText(ReadFile(agents_csv), ReadFile(options_csv),
                       ReadFile(providers_csv));
}

}  // namespace havenmatch
