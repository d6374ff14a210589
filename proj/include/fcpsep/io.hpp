// Copyright 2026 The fcpsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef FCPSEP_IO_HPP_
#define FCPSEP_IO_HPP_

#include "fcpsep/core.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>

namespace fcpsep
{

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

/// FNV-1a of a file's bytes as 16 lowercase hex digits. Throws IoError.
std::string file_digest(const std::filesystem::path & path);

/// Writes a file through `body`, creating parent directories. The stream
/// uses the classic locale. Throws IoError on any failure.
void write_text_file(const std::filesystem::path & path, const std::function<void(std::ostream &)> & body);

std::string read_text_file(const std::filesystem::path & path);

/// `t,f,re,im` rows, frames outer, 17 significant digits.
void write_spectrogram_csv(std::ostream & os, const Spectrogram & s);

}  // namespace fcpsep

#endif  // FCPSEP_IO_HPP_
