#include "synthrisk/schema.hpp"

#include <unordered_set>

namespace synthrisk {

Schema::Schema(std::vector<Attribute> attrs) : attrs_(std::move(attrs)) { validate(); }

void Schema::validate() const {
    std::unordered_set<std::string> seen;
    for (const auto& a : attrs_) {
        if (a.name.empty()) throw std::invalid_argument("schema: empty attribute name");
        if (!seen.insert(a.name).second)
            throw std::invalid_argument("schema: duplicate attribute name '" + a.name + "'");
        if (a.kind == AttrKind::Numeric) {
            if (a.min && a.max && *a.min > *a.max)
                throw std::invalid_argument("schema: min > max for '" + a.name + "'");
        }
        for (std::size_t i = 0; i < a.vocabulary.size(); ++i)
            for (std::size_t j = i + 1; j < a.vocabulary.size(); ++j)
                if (a.vocabulary[i] == a.vocabulary[j])
                    throw std::invalid_argument("schema: duplicate level in '" + a.name + "'");
    }
}

std::size_t Schema::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < attrs_.size(); ++i)
        if (attrs_[i].name == name) return i;
    throw std::invalid_argument("schema: unknown attribute '" + name + "'");
}

bool Schema::has(const std::string& name) const {
    for (const auto& a : attrs_)
        if (a.name == name) return true;
    return false;
}

std::optional<std::size_t> Schema::level_of(std::size_t attr, const std::string& value) const {
    const auto& vocab = attrs_.at(attr).vocabulary;
    for (std::size_t i = 0; i < vocab.size(); ++i)
        if (vocab[i] == value) return i;
    return std::nullopt;
}

std::size_t Schema::add_level(std::size_t attr, const std::string& value) {
    auto& a = attrs_.at(attr);
    a.vocabulary.push_back(value);
    return a.vocabulary.size() - 1;
}

bool Schema::operator==(const Schema& other) const {
    if (attrs_.size() != other.attrs_.size()) return false;
    for (std::size_t i = 0; i < attrs_.size(); ++i) {
        const auto& a = attrs_[i];
        const auto& b = other.attrs_[i];
        if (a.name != b.name || a.kind != b.kind || a.vocabulary != b.vocabulary) return false;
    }
    return true;
}

}  // namespace synthrisk
