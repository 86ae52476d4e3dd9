#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vulmatch/siggen.hpp"

namespace vulmatch {

inline constexpr const char* kDatabaseSchema = "vulmatch-db/1";

struct CveRecord {
    std::string cve_id;
    std::string project;
    std::vector<std::string> vulnerable_files;
    std::vector<std::string> vulnerable_functions;
    std::vector<std::string> affected_versions;
};

struct SignatureDatabase {
    std::string schema_version = kDatabaseSchema;
    std::vector<CveRecord> records;
    std::vector<Signature> signatures;

    void validate(const std::string& where = "database") const;
    const CveRecord* find_record(const std::string& cve_id) const;
    CveRecord* find_record(const std::string& cve_id);

    // Next free ordinal within the (cve, function, kind) group.
    int next_ordinal(const std::string& cve_id, const std::string& function_name,
                     SignatureKind kind) const;
};

SignatureDatabase database_from_json(const json& doc, const std::string& where);
json database_to_json(const SignatureDatabase& db);

SignatureDatabase load_database(const std::string& path);
void save_database(const SignatureDatabase& db, const std::string& path);

// All signatures, or those of one CVE in stored order; UnknownCve when the
// filter matches no record.
std::vector<Signature> query(const SignatureDatabase& db,
                             const std::optional<std::string>& cve_id = std::nullopt);

} // namespace vulmatch
