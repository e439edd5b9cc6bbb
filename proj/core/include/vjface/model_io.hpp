#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "vjface/cascade.hpp"
#include "vjface/recognizer.hpp"

namespace vjface {

inline constexpr std::string_view model_magic = "VJBP";
inline constexpr std::string_view model_version = "1";

using Model = std::variant<Cascade, RecognizerModel>;

/// Lossless text form of a double: C99 hex float ("0x1.8p+1"), or
/// "inf"/"-inf".
std::string format_hex(double v);
/// Inverse of format_hex; throws FormatError (line 0) on bad input.
double parse_hex(std::string_view text);

std::string serialize(const Cascade& cascade);
std::string serialize(const RecognizerModel& model);

/// Throws FormatError naming the failing line, or VersionMismatchError.
Model parse_model(std::string_view text);

void save_model(const Cascade& cascade, const std::filesystem::path& path);
void save_model(const RecognizerModel& model, const std::filesystem::path& path);

Model load_model(const std::filesystem::path& path);
Cascade load_cascade(const std::filesystem::path& path);
RecognizerModel load_recognizer(const std::filesystem::path& path);

}  // namespace vjface
