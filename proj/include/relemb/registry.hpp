#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace relemb {

using TypeId = std::uint32_t;
using EntityId = std::uint32_t;

constexpr TypeId kInvalidType = static_cast<TypeId>(-1);

// Bidirectional map between (entity-type, entity-name) and dense integer ids.
// Ids are contiguous from 0 within each type. A "context" type is an alias
// used for matrix columns whose semantic type equals an existing target type;
// the trainer treats it as a distinct type, consumers may resolve it back.
class EntityRegistry {
 public:
  // Registers a target type, or returns the existing id for the name.
  TypeId add_type(std::string_view name);

  // Registers a context type aliasing `target`. The alias target must exist.
  TypeId add_context_type(std::string_view name, TypeId target);

  // Convention used by file loaders and builders: a type named "<base>-ctx"
  // is a context alias of "<base>" (the base type is created if missing).
  TypeId add_type_auto(std::string_view name);

  bool has_type(std::string_view name) const { return type_ids_.count(std::string(name)) > 0; }
  TypeId type_id(std::string_view name) const;  // throws DataError if unknown
  const std::string& type_name(TypeId t) const { return types_.at(t).name; }
  // Target type a context type aliases; empty for target types.
  std::optional<TypeId> alias_target(TypeId t) const;

  EntityId register_entity(TypeId type, std::string_view name);
  EntityId register_entity(std::string_view type_name, std::string_view name);

  std::optional<EntityId> find_entity(TypeId type, std::string_view name) const;
  const std::string& entity_name(TypeId type, EntityId id) const;

  std::size_t type_count() const { return types_.size(); }
  std::size_t entity_count(TypeId type) const { return types_.at(type).names.size(); }
  std::size_t total_entities() const;

  const std::vector<std::string>& entity_names(TypeId type) const {
    return types_.at(type).names;
  }

 private:
  struct TypeRecord {
    std::string name;
    TypeId alias_of = kInvalidType;  // kInvalidType for target types
    std::vector<std::string> names;  // id -> entity name
    std::unordered_map<std::string, EntityId> ids;
  };

  TypeRecord& checked(TypeId t);
  const TypeRecord& checked(TypeId t) const;

  std::vector<TypeRecord> types_;
  std::unordered_map<std::string, TypeId> type_ids_;
};

}  // namespace relemb
