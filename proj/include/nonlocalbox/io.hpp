#pragma once

// File formats.
//
// Box JSON, discriminated by "format":
//   {"format":"full","probabilities":[[P00,P01,P10,P11] per setting]}
//     rows ordered xy = 00, 01, 10, 11; outcome columns ab = 00,01,10,11
//   {"format":"ns_params","m1":..,"m2":..,"n1":..,"n2":..,"c":[c1..c4]}
//   {"format":"equal_bias","p":..,"c":[c1..c4]}
//
// Box CSV: the 4x4 probability table, one setting row per line,
// 6 decimal places.

#include <optional>
#include <string>

#include <json.hpp>

#include "nonlocalbox/box.hpp"
#include "nonlocalbox/criteria.hpp"
#include "nonlocalbox/errors.hpp"
#include "nonlocalbox/macro_sim.hpp"
#include "nonlocalbox/optimizer.hpp"

namespace nlb {

enum class BoxFormat { full, ns_params, equal_bias };
const char* to_string(BoxFormat f);

// A parsed box plus whatever structured form the file carried.
struct LoadedBox {
    CorrelationBox box;
    BoxFormat format = BoxFormat::full;
    std::optional<NsParams> params;        // set unless format == full
    std::optional<EqualBiasBox> equal_bias; // set iff format == equal_bias
};

// Parse/load a box. Schema problems throw ParseError naming the field;
// file problems throw IoError; the box itself is validated and may
// throw the validation errors.
LoadedBox box_from_json(const nlohmann::json& j,
                        double tolerance = kDefaultTolerance);
LoadedBox load_box(const std::string& path,
                   double tolerance = kDefaultTolerance);

nlohmann::json box_to_json(const CorrelationBox& box);
nlohmann::json box_to_json(const NsParams& p);
nlohmann::json box_to_json(const EqualBiasBox& b);

nlohmann::json to_json(const CriterionReport& r);
nlohmann::json to_json(const BiasMaxResult& r);
nlohmann::json to_json(const MacroResult& r);

// Pretty-printed file write, trailing newline. Throws IoError.
void write_json_file(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json_file(const std::string& path);

// 4x4 probability table at 6 decimals.
void write_box_csv(const CorrelationBox& box, const std::string& path);
// Human-readable table, same layout, with setting/outcome headers.
std::string box_table(const CorrelationBox& box);

} // namespace nlb
