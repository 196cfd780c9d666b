#include "forgery/cascade.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "forgery/errors.hpp"
#include "forgery/text.hpp"

namespace forgery {

namespace {

namespace pt = boost::property_tree;

const pt::ptree& require_child(const pt::ptree& node, const char* name) {
    const auto child = node.get_child_optional(name);
    if (!child)
        throw ParseError(std::string("cascade: missing <") + name + ">");
    return *child;
}

std::string text_of(const pt::ptree& node, const char* name) {
    return std::string(trim(require_child(node, name).get_value<std::string>()));
}

long long int_of(const pt::ptree& node, const char* name) {
    const std::string text = text_of(node, name);
    const auto v = parse_int(text);
    if (!v)
        throw ParseError(std::string("cascade: <") + name +
                         "> is not an integer: '" + text + "'");
    return *v;
}

std::vector<double> doubles_of(const pt::ptree& node, const char* name) {
    std::vector<double> out;
    for (std::string_view tok :
         split_whitespace(require_child(node, name).get_value<std::string>())) {
        const auto v = parse_double(tok);
        if (!v)
            throw ParseError(std::string("cascade: <") + name +
                             "> contains a non-numeric token '" +
                             std::string(tok) + "'");
        out.push_back(*v);
    }
    return out;
}

std::vector<double> doubles_of_value(const pt::ptree& node, const char* what) {
    std::vector<double> out;
    for (std::string_view tok :
         split_whitespace(node.get_value<std::string>())) {
        const auto v = parse_double(tok);
        if (!v)
            throw ParseError(std::string("cascade: ") + what +
                             " contains a non-numeric token '" +
                             std::string(tok) + "'");
        out.push_back(*v);
    }
    return out;
}

} // namespace

CascadeModel parse_cascade(std::string_view xml_text) {
    pt::ptree doc;
    try {
        std::istringstream stream{std::string(xml_text)};
        pt::read_xml(stream, doc);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(std::string("cascade: malformed XML: ") + e.what());
    }

    const auto storage = doc.get_child_optional("opencv_storage");
    if (!storage)
        throw ParseError("cascade: missing <opencv_storage> root");
    const auto cascade = storage->get_child_optional("cascade");
    if (!cascade)
        throw ParseError("cascade: missing <cascade> node");

    const std::string stage_type = text_of(*cascade, "stageType");
    if (stage_type != "BOOST")
        throw UnsupportedError("cascade: unsupported stageType '" + stage_type +
                               "'");
    const std::string feature_type = text_of(*cascade, "featureType");
    if (feature_type != "HAAR")
        throw UnsupportedError("cascade: unsupported featureType '" +
                               feature_type + "' (only HAAR is handled)");

    CascadeModel model;
    model.window_w = static_cast<int>(int_of(*cascade, "width"));
    model.window_h = static_cast<int>(int_of(*cascade, "height"));
    if (model.window_w <= 0 || model.window_h <= 0)
        throw ParseError("cascade: non-positive base window");

    if (const auto stage_params = cascade->get_child_optional("stageParams")) {
        if (stage_params->get_child_optional("maxDepth") &&
            int_of(*stage_params, "maxDepth") != 1)
            throw UnsupportedError(
                "cascade: tree classifiers (maxDepth != 1) are not supported");
    }
    if (const auto feature_params =
            cascade->get_child_optional("featureParams")) {
        if (feature_params->get_child_optional("maxCatCount") &&
            int_of(*feature_params, "maxCatCount") != 0)
            throw UnsupportedError(
                "cascade: categorical features are not supported");
    }

    for (const auto& [key, stage_node] : require_child(*cascade, "stages")) {
        if (key != "_")
            continue;
        CascadeStage stage;
        const std::string threshold_text = text_of(stage_node, "stageThreshold");
        const auto threshold = parse_double(threshold_text);
        if (!threshold || !std::isfinite(*threshold))
            throw ParseError("cascade: bad stageThreshold '" + threshold_text +
                             "'");
        stage.threshold = *threshold;

        for (const auto& [wkey, weak_node] :
             require_child(stage_node, "weakClassifiers")) {
            if (wkey != "_")
                continue;
            const std::vector<double> internal =
                doubles_of(weak_node, "internalNodes");
            const std::vector<double> leaves = doubles_of(weak_node, "leafValues");
            if (internal.size() != 4)
                throw UnsupportedError(
                    "cascade: only stump weak classifiers are supported "
                    "(internalNodes must hold one node)");
            if (leaves.size() != 2)
                throw ParseError("cascade: leafValues must hold two values");
            WeakClassifier weak;
            weak.feature_index = static_cast<int>(internal[2]);
            weak.threshold = internal[3];
            weak.leaf_below = leaves[0];
            weak.leaf_above = leaves[1];
            stage.weak.push_back(weak);
        }
        if (stage.weak.empty())
            throw ParseError("cascade: stage with no weak classifiers");
        model.stages.push_back(std::move(stage));
    }
    if (model.stages.empty())
        throw ValidationError("cascade: no stages");

    for (const auto& [key, feature_node] : require_child(*cascade, "features")) {
        if (key != "_")
            continue;
        if (feature_node.get_child_optional("tilted") &&
            int_of(feature_node, "tilted") != 0)
            throw UnsupportedError("cascade: tilted features are not supported");
        HaarFeature feature;
        for (const auto& [rkey, rect_node] :
             require_child(feature_node, "rects")) {
            if (rkey != "_")
                continue;
            const std::vector<double> vals =
                doubles_of_value(rect_node, "feature rect");
            if (vals.size() != 5)
                throw ParseError(
                    "cascade: feature rect must be 'x y w h weight'");
            HaarFeature::WeightedRect wr;
            wr.rect = Rect{static_cast<int>(vals[0]), static_cast<int>(vals[1]),
                           static_cast<int>(vals[2]), static_cast<int>(vals[3])};
            wr.weight = vals[4];
            if (!wr.rect.inside(model.window_w, model.window_h))
                throw ValidationError(
                    "cascade: feature rect outside the base window");
            feature.rects.push_back(wr);
        }
        if (feature.rects.size() < 2 || feature.rects.size() > 3)
            throw ValidationError("cascade: feature must have 2 or 3 rects");
        int negatives = 0;
        for (const auto& wr : feature.rects)
            if (wr.weight < 0.0)
                ++negatives;
        if (negatives != 1)
            throw ValidationError(
                "cascade: feature must have exactly one negative-weight rect");
        model.features.push_back(std::move(feature));
    }
    if (model.features.empty())
        throw ValidationError("cascade: no features");

    for (const CascadeStage& stage : model.stages)
        for (const WeakClassifier& weak : stage.weak)
            if (weak.feature_index < 0 ||
                weak.feature_index >= static_cast<int>(model.features.size()))
                throw ValidationError("cascade: weak classifier references "
                                      "feature index out of range");
    return model;
}

CascadeModel load_cascade(const std::filesystem::path& path) {
    try {
        return parse_cascade(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    } catch (const UnsupportedError& e) {
        throw UnsupportedError(path.string() + ": " + e.what());
    }
}

} // namespace forgery
