#pragma once

#include "lvnf/nonpoly.hpp"
#include "lvnf/qp_system.hpp"
#include "lvnf/simulate.hpp"

#include <string>

namespace lvnf {

// Canonical JSON serialization: keys sorted alphabetically, two-space
// indentation, trailing newline. Exponents and transforms are exact
// "num/den" strings; coefficients are plain JSON numbers when the value is
// exactly double-representable and "num/den" strings otherwise, so dumping
// and re-parsing is lossless in both cases.
std::string to_json(const QPSystem& sys);
std::string to_json(const LVSystem& sys);
std::string to_json(const GeneralSystem& sys);
std::string to_json(const AuxSpec& spec);
std::string to_json(const VerifyReport& rep);

// Parsers for the same schemas. Malformed JSON text raises IoError; text
// that parses but does not match the schema raises ValidationError. The
// returned objects are structurally complete but not semantically validated;
// run validate()/validate_general() for that.
QPSystem qp_from_json(const std::string& text);
LVSystem lv_from_json(const std::string& text);
GeneralSystem general_from_json(const std::string& text);
AuxSpec aux_from_json(const std::string& text);

// Distinguishes the three model schemas by their discriminating fields
// ("functions"/"equations" for general systems, "B" for GLV, "A_prime" for
// LV normal forms).
enum class ModelKind { General, QP, LV };
ModelKind detect_model(const std::string& text);

// CSV export: header "t,<label>,...", one row per recorded sample, values
// printed with 17 significant digits.
std::string trajectory_csv(const Trajectory& traj);

// Whole-file helpers; the path "-" designates standard input/output.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace lvnf
