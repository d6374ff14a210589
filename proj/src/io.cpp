// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "fcpsep/io.hpp"

#include <cstdio>
#include <iomanip>
#include <locale>
#include <sstream>

namespace fcpsep
{

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed)
{
  std::uint64_t h = seed;
  for (const char ch : bytes) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_text_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failed for '" + path.string() + "'");
  }
  return ss.str();
}

std::string file_digest(const std::filesystem::path & path)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(read_text_file(path))));
  return buf;
}

void write_text_file(const std::filesystem::path & path, const std::function<void(std::ostream &)> & body)
{
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out.imbue(std::locale::classic());
  body(out);
  out.flush();
  if (!out) {
    throw IoError("write failed for '" + path.string() + "'");
  }
}

void write_spectrogram_csv(std::ostream & os, const Spectrogram & s)
{
  os.imbue(std::locale::classic());
  os << "t,f,re,im\n" << std::setprecision(17);
  for (Eigen::Index t = 0; t < s.rows(); ++t) {
    for (Eigen::Index f = 0; f < s.cols(); ++f) {
      os << t << ',' << f << ',' << s(t, f).real() << ',' << s(t, f).imag() << '\n';
    }
  }
}

}  // namespace fcpsep
