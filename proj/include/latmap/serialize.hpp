// Copyright 2026 The latmap Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "latmap/backend.hpp"
#include "latmap/lattice.hpp"
#include "latmap/quantum.hpp"
#include "latmap/rewrite.hpp"
#include "latmap/spin_model.hpp"

namespace latmap {

using Json = nlohmann::ordered_json;

// All parsers throw Error(Validation) on schema violations.
Json model_to_json(const SpinModel& m);
SpinModel model_from_json(const Json& j);

Json geometry_to_json(const LatticeGeometry& g);
LatticeGeometry geometry_from_json(const Json& j);

Json trace_to_json(const RewriteTrace& t);
RewriteTrace trace_from_json(const Json& j);

Json instance_to_json(const CompiledInstance& inst);
CompiledInstance instance_from_json(const Json& j);

Json report_to_json(const VerifyReport& r);

// {"index_convention": ..., "values": [...]}
Json vector_to_json(const std::vector<double>& v);
std::vector<double> vector_from_json(const Json& j);

// Sparse coordinate list of the incidence matrix.
Json incidence_to_json(const DenseGf2& a);

Json read_json_file(const std::string& path);
// Writes to a temporary file and renames it over `path`.
void write_text_atomic(const std::string& path, const std::string& text);

}  // namespace latmap
