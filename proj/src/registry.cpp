#include "relemb/registry.hpp"

#include "relemb/errors.hpp"

namespace relemb {

TypeId EntityRegistry::add_type(std::string_view name) {
  std::string key(name);
  auto it = type_ids_.find(key);
  if (it != type_ids_.end()) {
    if (types_[it->second].alias_of != kInvalidType) {
      throw DataError("type '" + key + "' already registered as a context alias");
    }
    return it->second;
  }
  TypeId id = static_cast<TypeId>(types_.size());
  types_.push_back(TypeRecord{key, kInvalidType, {}, {}});
  type_ids_.emplace(std::move(key), id);
  return id;
}

TypeId EntityRegistry::add_context_type(std::string_view name, TypeId target) {
  checked(target);
  if (types_[target].alias_of != kInvalidType) {
    throw DataError("context type cannot alias another context type");
  }
  std::string key(name);
  auto it = type_ids_.find(key);
  if (it != type_ids_.end()) {
    if (types_[it->second].alias_of != target) {
      throw DataError("type '" + key + "' already registered with a different role");
    }
    return it->second;
  }
  TypeId id = static_cast<TypeId>(types_.size());
  types_.push_back(TypeRecord{key, target, {}, {}});
  type_ids_.emplace(std::move(key), id);
  return id;
}

TypeId EntityRegistry::add_type_auto(std::string_view name) {
  constexpr std::string_view suffix = "-ctx";
  if (name.size() > suffix.size() &&
      name.substr(name.size() - suffix.size()) == suffix) {
    TypeId base = add_type(name.substr(0, name.size() - suffix.size()));
    return add_context_type(name, base);
  }
  return add_type(name);
}

TypeId EntityRegistry::type_id(std::string_view name) const {
  auto it = type_ids_.find(std::string(name));
  if (it == type_ids_.end()) {
    throw DataError("unknown entity type '" + std::string(name) + "'");
  }
  return it->second;
}

std::optional<TypeId> EntityRegistry::alias_target(TypeId t) const {
  const TypeRecord& rec = checked(t);
  if (rec.alias_of == kInvalidType) return std::nullopt;
  return rec.alias_of;
}

EntityId EntityRegistry::register_entity(TypeId type, std::string_view name) {
  TypeRecord& rec = checked(type);
  std::string key(name);
  auto it = rec.ids.find(key);
  if (it != rec.ids.end()) return it->second;
  EntityId id = static_cast<EntityId>(rec.names.size());
  rec.names.push_back(key);
  rec.ids.emplace(std::move(key), id);
  return id;
}

EntityId EntityRegistry::register_entity(std::string_view type_name,
                                         std::string_view name) {
  return register_entity(type_id(type_name), name);
}

std::optional<EntityId> EntityRegistry::find_entity(TypeId type,
                                                    std::string_view name) const {
  const TypeRecord& rec = checked(type);
  auto it = rec.ids.find(std::string(name));
  if (it == rec.ids.end()) return std::nullopt;
  return it->second;
}

const std::string& EntityRegistry::entity_name(TypeId type, EntityId id) const {
  const TypeRecord& rec = checked(type);
  if (id >= rec.names.size()) {
    throw DataError("entity id " + std::to_string(id) + " out of range for type '" +
                    rec.name + "'");
  }
  return rec.names[id];
}

std::size_t EntityRegistry::total_entities() const {
  std::size_t n = 0;
  for (const auto& rec : types_) n += rec.names.size();
  return n;
}

EntityRegistry::TypeRecord& EntityRegistry::checked(TypeId t) {
  if (t >= types_.size()) {
    throw DataError("type id " + std::to_string(t) + " out of range");
  }
  return types_[t];
}

const EntityRegistry::TypeRecord& EntityRegistry::checked(TypeId t) const {
  if (t >= types_.size()) {
    throw DataError("type id " + std::to_string(t) + " out of range");
  }
  return types_[t];
}

}  // namespace relemb
