#include "vulmatch/sigdb.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace vulmatch {

namespace {

std::vector<std::string> string_list_from_json(const json& value, const std::string& where) {
    if (!value.is_array()) {
        raise(ErrorCode::SchemaError, where + ": expected array");
    }
    std::vector<std::string> out;
    for (const json& cell : value) {
        if (!cell.is_string()) {
            raise(ErrorCode::SchemaError, where + ": expected string entries");
        }
        out.push_back(cell.get<std::string>());
    }
    return out;
}

} // namespace

void SignatureDatabase::validate(const std::string& where) const {
    if (schema_version != kDatabaseSchema) {
        raise(ErrorCode::SchemaVersionMismatch,
              where + ": schema '" + schema_version + "' (expected " + kDatabaseSchema + ")");
    }
    std::set<std::string> cves;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::string rwhere = where + "/records/" + std::to_string(i);
        const CveRecord& record = records[i];
        if (record.cve_id.empty()) {
            raise(ErrorCode::ValidationError, rwhere + ": empty cve_id");
        }
        if (!cves.insert(record.cve_id).second) {
            raise(ErrorCode::ValidationError, rwhere + ": duplicate cve_id '" + record.cve_id + "'");
        }
        if (record.vulnerable_files.empty() || record.vulnerable_functions.empty() ||
            record.affected_versions.empty()) {
            raise(ErrorCode::ValidationError,
                  rwhere + ": record lists must be non-empty for '" + record.cve_id + "'");
        }
    }
    std::set<std::tuple<std::string, std::string, SignatureKind, int>> keys;
    for (std::size_t i = 0; i < signatures.size(); ++i) {
        const std::string swhere = where + "/signatures/" + std::to_string(i);
        const Signature& sig = signatures[i];
        sig.validate(swhere);
        if (cves.count(sig.cve_id) == 0) {
            raise(ErrorCode::ValidationError,
                  swhere + ": signature for '" + sig.cve_id + "' has no CVE record");
        }
        if (!keys.insert({sig.cve_id, sig.function_name, sig.kind, sig.ordinal}).second) {
            raise(ErrorCode::ValidationError,
                  swhere + ": duplicate signature key (" + sig.cve_id + ", " + sig.function_name +
                      ", " + signature_kind_name(sig.kind) + ", " + std::to_string(sig.ordinal) + ")");
        }
    }
}

const CveRecord* SignatureDatabase::find_record(const std::string& cve_id) const {
    for (const CveRecord& record : records) {
        if (record.cve_id == cve_id) {
            return &record;
        }
    }
    return nullptr;
}

CveRecord* SignatureDatabase::find_record(const std::string& cve_id) {
    for (CveRecord& record : records) {
        if (record.cve_id == cve_id) {
            return &record;
        }
    }
    return nullptr;
}

int SignatureDatabase::next_ordinal(const std::string& cve_id, const std::string& function_name,
                                    SignatureKind kind) const {
    int next = 0;
    for (const Signature& sig : signatures) {
        if (sig.cve_id == cve_id && sig.function_name == function_name && sig.kind == kind) {
            next = std::max(next, sig.ordinal + 1);
        }
    }
    return next;
}

SignatureDatabase database_from_json(const json& doc, const std::string& where) {
    SignatureDatabase db;
    db.schema_version = require_string(doc, "schema", where);
    if (db.schema_version != kDatabaseSchema) {
        raise(ErrorCode::SchemaVersionMismatch,
              where + "/schema: '" + db.schema_version + "' (expected " + kDatabaseSchema + ")");
    }
    const json& records = require_array(doc, "records", where);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::string rwhere = where + "/records/" + std::to_string(i);
        const json& jrecord = records[i];
        CveRecord record;
        record.cve_id = require_string(jrecord, "cve_id", rwhere);
        record.project = require_string(jrecord, "project", rwhere);
        record.vulnerable_files =
            string_list_from_json(require_array(jrecord, "vulnerable_files", rwhere), rwhere + "/vulnerable_files");
        record.vulnerable_functions = string_list_from_json(
            require_array(jrecord, "vulnerable_functions", rwhere), rwhere + "/vulnerable_functions");
        record.affected_versions = string_list_from_json(
            require_array(jrecord, "affected_versions", rwhere), rwhere + "/affected_versions");
        db.records.push_back(std::move(record));
    }
    const json& signatures = require_array(doc, "signatures", where);
    for (std::size_t i = 0; i < signatures.size(); ++i) {
        db.signatures.push_back(
            signature_from_json(signatures[i], where + "/signatures/" + std::to_string(i)));
    }
    db.validate(where);
    return db;
}

json database_to_json(const SignatureDatabase& db) {
    json doc;
    doc["schema"] = db.schema_version;
    doc["records"] = json::array();
    for (const CveRecord& record : db.records) {
        json jrecord;
        jrecord["cve_id"] = record.cve_id;
        jrecord["project"] = record.project;
        jrecord["vulnerable_files"] = record.vulnerable_files;
        jrecord["vulnerable_functions"] = record.vulnerable_functions;
        jrecord["affected_versions"] = record.affected_versions;
        doc["records"].push_back(std::move(jrecord));
    }
    doc["signatures"] = json::array();
    for (const Signature& sig : db.signatures) {
        doc["signatures"].push_back(signature_to_json(sig));
    }
    return doc;
}

SignatureDatabase load_database(const std::string& path) {
    return database_from_json(load_json_file(path), path);
}

void save_database(const SignatureDatabase& db, const std::string& path) {
    db.validate();
    save_json_file(path, database_to_json(db));
}

std::vector<Signature> query(const SignatureDatabase& db, const std::optional<std::string>& cve_id) {
    if (!cve_id.has_value()) {
        return db.signatures;
    }
    if (db.find_record(*cve_id) == nullptr) {
        raise(ErrorCode::UnknownCve, "no record for '" + *cve_id + "'");
    }
    std::vector<Signature> out;
    for (const Signature& sig : db.signatures) {
        if (sig.cve_id == *cve_id) {
            out.push_back(sig);
        }
    }
    return out;
}

} // namespace vulmatch
