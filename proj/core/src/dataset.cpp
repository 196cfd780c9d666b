#include "forgery/dataset.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "forgery/codec.hpp"
#include "forgery/errors.hpp"
#include "forgery/text.hpp"

namespace forgery {

namespace {

bool has_image_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::map<std::string, std::string>
read_labels(const std::filesystem::path& labels_csv) {
    if (!std::filesystem::exists(labels_csv))
        throw IoError("labels file missing: " + labels_csv.string());
    const std::string content = read_text_file(labels_csv);
    const auto lines = split_char(content, '\n');
    if (lines.empty() || trim(lines[0]) != "image_id,label")
        throw ParseError(labels_csv.string() +
                         ": expected header 'image_id,label'");
    std::map<std::string, std::string> labels;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty())
            continue;
        const auto fields = split_char(line, ',');
        if (fields.size() != 2)
            throw ParseError(labels_csv.string() + ":" + std::to_string(i + 1) +
                             ": expected 'image_id,label'");
        const std::string id(trim(fields[0]));
        const std::string label(trim(fields[1]));
        if (label != "real" && label != "fake")
            throw ParseError(labels_csv.string() + ":" + std::to_string(i + 1) +
                             ": label must be 'real' or 'fake', got '" + label +
                             "'");
        if (!labels.emplace(id, label).second)
            throw ValidationError(labels_csv.string() + ": duplicate image id '" +
                                  id + "'");
    }
    return labels;
}

} // namespace

std::vector<const SourceEntry*>
SourceIndex::pool(const std::string& source_filter, bool needs_landmarks) const {
    if (source_filter != "real" && source_filter != "fake" &&
        source_filter != "any")
        throw ParameterError("source filter must be real, fake, or any; got '" +
                             source_filter + "'");
    std::vector<const SourceEntry*> out;
    for (const SourceEntry& entry : entries) {
        if (source_filter != "any" && entry.label != source_filter)
            continue;
        if (needs_landmarks && !entry.has_landmarks)
            continue;
        out.push_back(&entry);
    }
    return out;
}

SourceIndex scan_dataset(const std::filesystem::path& root,
                         const std::filesystem::path& labels_csv) {
    if (!std::filesystem::is_directory(root))
        throw IoError("dataset root missing: " + root.string());
    auto labels = read_labels(labels_csv);

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root))
        if (entry.is_regular_file() && has_image_extension(entry.path()))
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    SourceIndex index;
    std::set<std::string> matched_labels;
    for (const auto& file : files) {
        const std::string id =
            std::filesystem::relative(file, root).generic_string();
        try {
            (void)load_image(file);
        } catch (const Error&) {
            index.report.undecodable.push_back(id);
            continue;
        }
        const auto label_it = labels.find(id);
        if (label_it == labels.end()) {
            index.report.unlabeled.push_back(id);
            continue;
        }
        matched_labels.insert(id);

        SourceEntry entry;
        entry.id = id;
        entry.path = file;
        entry.label = label_it->second;
        entry.landmark_path = file;
        entry.landmark_path.replace_extension(".landmarks");
        entry.has_landmarks = std::filesystem::exists(entry.landmark_path);
        index.entries.push_back(std::move(entry));
    }
    for (const auto& [id, label] : labels)
        if (!matched_labels.contains(id))
            index.report.labels_without_image.push_back(id);
    return index;
}

} // namespace forgery
