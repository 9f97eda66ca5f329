// Copyright 2026 The vhfasr Authors.
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "vhfasr/ctc.h"
#include "vhfasr/error.h"

namespace vhfasr {
namespace {

constexpr char kMagic[4] = {'C', 'T', 'C', 'L'};
constexpr std::uint16_t kVersion = 1;

std::string ReadAll(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void WriteAll(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path.string());
}

std::uint32_t GetU32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void PutU32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2)
    throw InvalidArgument("vocabulary needs a blank and at least one label");
  for (std::size_t i = 1; i < labels_.size(); ++i) {
    if (labels_[i] == "|" || labels_[i] == "<space>" || labels_[i] == " ") {
      if (delimiter_)
        throw InvalidArgument("vocabulary defines more than one word delimiter");
      delimiter_ = static_cast<int>(i);
    }
  }
}

Vocabulary Vocabulary::Load(const std::filesystem::path& path) {
  std::istringstream in(ReadAll(path));
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    labels.push_back(line);
  }
  // A trailing blank line is a file terminator, not a label.
  while (labels.size() > 1 && labels.back().empty()) labels.pop_back();
  try {
    return Vocabulary(std::move(labels));
  } catch (const InvalidArgument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void Vocabulary::Save(const std::filesystem::path& path) const {
  std::string out;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    out += (delimiter_ && static_cast<int>(i) == *delimiter_) ? "|" : labels_[i];
    out += '\n';
  }
  WriteAll(path, out);
}

std::string Vocabulary::ToText(std::span<const int> labels) const {
  std::string out;
  bool pending_space = false;
  for (int l : labels) {
    if (delimiter_ && l == *delimiter_) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out += label(l);
  }
  return out;
}

void WriteLogitsBinary(const Matrix<double>& log_probs, const std::filesystem::path& path) {
  std::string out(kMagic, sizeof kMagic);
  out.push_back(static_cast<char>(kVersion & 0xFF));
  out.push_back(static_cast<char>(kVersion >> 8));
  PutU32(out, static_cast<std::uint32_t>(log_probs.rows()));
  PutU32(out, static_cast<std::uint32_t>(log_probs.cols()));
  for (double v : log_probs.data()) {
    const float f = static_cast<float>(v);
    std::uint32_t u;
    std::memcpy(&u, &f, sizeof u);
    PutU32(out, u);
  }
  WriteAll(path, out);
}

LogitsMatrix ReadLogitsBinary(const std::filesystem::path& path) {
  const std::string bytes = ReadAll(path);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  constexpr std::size_t kHeader = 4 + 2 + 4 + 4;
  if (bytes.size() < kHeader || std::memcmp(p, kMagic, 4) != 0)
    throw FormatError(path.string() + ": bad magic, expected CTCL");
  const std::uint16_t version = static_cast<std::uint16_t>(p[4] | (p[5] << 8));
  if (version != kVersion)
    throw FormatError(path.string() + ": unsupported logits version " +
                      std::to_string(version));
  const std::uint64_t frames = GetU32(p + 6);
  const std::uint64_t classes = GetU32(p + 10);
  if (bytes.size() != kHeader + frames * classes * 4)
    throw FormatError(path.string() + ": payload of " +
                      std::to_string(bytes.size() - kHeader) + " bytes does not match " +
                      std::to_string(frames) + "x" + std::to_string(classes));
  std::vector<double> values(frames * classes);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint32_t u = GetU32(p + kHeader + 4 * i);
    float f;
    std::memcpy(&f, &u, sizeof f);
    values[i] = f;
  }
  try {
    return LogitsMatrix(Matrix<double>(frames, classes, std::move(values)));
  } catch (const InvalidArgument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void WriteLogitsText(const Matrix<double>& log_probs, const std::filesystem::path& path) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t t = 0; t < log_probs.rows(); ++t) {
    const auto row = log_probs.row(t);
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? " " : "") << row[k];
    out << "\n";
  }
  WriteAll(path, out.str());
}

LogitsMatrix ReadLogitsText(const std::filesystem::path& path) {
  std::istringstream in(ReadAll(path));
  std::string line;
  std::vector<double> values;
  std::size_t classes = 0, frames = 0;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::vector<double> row;
    std::string tok;
    while (fields >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        // stod rejects "-inf" spellings on some libcs; accept them here.
        if (tok == "-inf" || tok == "-Inf" || tok == "-INF") {
          row.push_back(kNegInf);
        } else {
          throw FormatError(path.string() + ":" + std::to_string(line_no) +
                            ": bad number '" + tok + "'");
        }
      }
    }
    if (row.empty()) continue;
    if (classes == 0) classes = row.size();
    if (row.size() != classes)
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(classes) + " values, got " +
                        std::to_string(row.size()));
    values.insert(values.end(), row.begin(), row.end());
    ++frames;
  }
  if (classes == 0) classes = 2;  // empty file: zero frames
  try {
    return LogitsMatrix(Matrix<double>(frames, classes, std::move(values)));
  } catch (const InvalidArgument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace vhfasr
