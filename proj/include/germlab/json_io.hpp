#pragma once

// JSON views of the library's result types. Field names are stable; byte
// layout is not.

#include <json.hpp>

#include "germlab/centralizer.hpp"
#include "germlab/circle.hpp"
#include "germlab/sequence.hpp"

namespace germlab {

using json = nlohmann::ordered_json;

json to_json(cplx z);  // [re, im]
cplx cplx_from_json(const json& j);

/// {"order": N, "coeffs": [[re,im],...]}
json germ_to_json(const Germ& g);
Germ germ_from_json(const json& j);

json to_json(const ParabolicData& d);
json to_json(const KSetResult& k);
json to_json(const CentralizerVerdict& v);
json to_json(const AlphaSequence& s);
json to_json(const RotationNumberResult& r);
json to_json(const ParabolicParameter& p);
json to_json(const CircleSequence& s);
json to_json(const CircleCentralizerVerdict& v);

/// {"error": code, "message": text}
json error_json(const Error& e);

}  // namespace germlab
