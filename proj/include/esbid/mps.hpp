#pragma once

#include <string>

#include "esbid/linear_model.hpp"

namespace esbid {

// Fixed-column MPS text (NAME, optional OBJSENSE, ROWS, COLUMNS with
// INTORG/INTEND markers around binary runs, RHS, BOUNDS, ENDATA). Column
// positions are deterministic, so exports are byte-stable; the layout is
// whitespace-separated and parses as free MPS in external tools.
// The objective constant is carried as an RHS entry on the objective row
// (value = -offset). Names must be single tokens of at most 24 characters.
std::string export_mps(const LinearModel& model,
                       const std::string& name = "ESBID");

// Inverse of export_mps up to row/column ordering. RANGES entries split a
// ranged row into the original row plus "<name>__rng" carrying the far
// side. Throws ParseError (with a line number) on malformed input.
LinearModel import_mps(const std::string& text);

}  // namespace esbid
