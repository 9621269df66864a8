#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace synthrisk {

enum class AttrKind { Numeric, Categorical };

struct Attribute {
    std::string name;
    AttrKind kind = AttrKind::Numeric;
    // Declared range for numeric attributes (optional; observed range is used
    // when absent). Vocabulary for categorical attributes.
    std::optional<double> min;
    std::optional<double> max;
    std::vector<std::string> vocabulary;
};

class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<Attribute> attrs);

    std::size_t size() const { return attrs_.size(); }
    const Attribute& at(std::size_t i) const { return attrs_.at(i); }
    const std::vector<Attribute>& attributes() const { return attrs_; }

    // Index of the attribute with the given name; throws if unknown.
    std::size_t index_of(const std::string& name) const;
    bool has(const std::string& name) const;

    // Index of `value` in the vocabulary of categorical attribute `attr`, or
    // nullopt if unseen.
    std::optional<std::size_t> level_of(std::size_t attr, const std::string& value) const;

    // Appends a new vocabulary level; returns its index.
    std::size_t add_level(std::size_t attr, const std::string& value);

    void validate() const;

    bool operator==(const Schema& other) const;

private:
    std::vector<Attribute> attrs_;
};

}  // namespace synthrisk
