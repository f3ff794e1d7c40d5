#pragma once

#include "json_util.hpp"
#include "lela/localization.hpp"

namespace lela::detail {

OrderedJson frame_json(const std::string& video_id, const FrameScore& frame);
OrderedJson segments_json(const std::vector<Segment>& segments);
OrderedJson policy_json(const AggregationPolicy& policy);
OrderedJson profile_json(const HateProfile& profile);
HateProfile profile_from_json(const Json& profile);

}  // namespace lela::detail
