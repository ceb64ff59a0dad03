#pragma once

#include <string>

#include "json.hpp"

#include "fpg/gmodule.hpp"
#include "fpg/indexed_module.hpp"
#include "fpg/kummer_ff.hpp"
#include "fpg/pgroups.hpp"

namespace fpg {

using json = nlohmann::json;

// parse + dump with the library's exceptions mapped onto parse_error; dump
// output is key-sorted and newline-terminated so identical data gives
// byte-identical files
json parse_json_text(const std::string& text);
std::string dump_json(const json& v);

json matrix_to_json(const FpMatrix& m);
json vector_to_json(const FpVector& v);

json to_json(const GModule& m);
json to_json(const IndexedModule& im);
json to_json(const Decomposition& d);
json to_json(const JepsilonDecomposition& d);
json to_json(const RealizationWitness& w);
json to_json(const GroupInvariants& gi);
json to_json(const WittLink& link);
json to_json(const std::vector<WittLink>& chain);
json to_json(const KummerReport& rep);

GModule gmodule_from_json(const json& v, std::uint64_t ring_bound = 243);
IndexedModule indexed_module_from_json(const json& v, std::uint64_t ring_bound = 243);

struct RealizeInput {
    IndexedModule im;
    FpVector gamma;
};
RealizeInput realize_input_from_json(const json& v, std::uint64_t ring_bound = 243);

}  // namespace fpg
