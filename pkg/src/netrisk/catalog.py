"""Vulnerability catalog: records, exploit derivation, and host profiles.

A catalog maps CVE identifiers to base-metric records and to the exploit
parameters derived from them.  Profiles are named member lists used to stock
hosts of a given OS class.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from typing import Iterable, Mapping

_CVE_RE = re.compile(r"^CVE-(\d{4})-(\d{4,})$")

_RECORD_KEYS = {
    "cve_id",
    "published_year",
    "attack_vector",
    "access_complexity",
    "authentication",
    "conf_impact",
    "integ_impact",
    "avail_impact",
}


class CatalogError(ValueError):
    """Raised for malformed catalog or profile input."""


class AttackVector(Enum):
    LOCAL = "Local"
    ADJACENT_NETWORK = "AdjacentNetwork"
    NETWORK = "Network"


class AccessComplexity(Enum):
    LOW = "Low"
    MEDIUM = "Medium"
    HIGH = "High"


class Authentication(Enum):
    NONE = "None"
    SINGLE = "Single"
    MULTIPLE = "Multiple"


class Impact(Enum):
    NONE = "None"
    PARTIAL = "Partial"
    COMPLETE = "Complete"


class AccessRequirement(Enum):
    REQUIRES_LOCAL = "RequiresLocal"
    REQUIRES_ADJACENT = "RequiresAdjacent"
    REQUIRES_NETWORK_OR_ADJACENT = "RequiresNetworkOrAdjacent"


class Grant(Enum):
    READ_ACCESS = "ReadAccess"
    COMPROMISED = "Compromised"


class OsClass(Enum):
    WINDOWS_DESKTOP = "WindowsDesktop"
    LINUX_DESKTOP = "LinuxDesktop"
    WINDOWS_SERVER = "WindowsServer"
    LINUX_SERVER = "LinuxServer"


@dataclass(frozen=True)
class VulnRecord:
    cve_id: str
    year: int
    published_year: int
    attack_vector: AttackVector
    access_complexity: AccessComplexity
    authentication: Authentication
    conf_impact: Impact
    integ_impact: Impact
    avail_impact: Impact


@dataclass(frozen=True)
class DerivedExploit:
    """Attack-relevant view of a record: what access it needs, whether it
    needs credentials, how likely it is to be present unpatched, and what it
    grants (always read access plus host compromise)."""

    cve_id: str
    access_requirement: AccessRequirement
    requires_credentials: bool
    presence_probability: float
    grants: frozenset[Grant]


@dataclass(frozen=True)
class VulnProfile:
    name: str
    os_class: OsClass
    members: tuple[str, ...]


@dataclass(frozen=True)
class Catalog:
    records: Mapping[str, VulnRecord]
    derived: Mapping[str, DerivedExploit]

    def __post_init__(self):
        if set(self.records) != set(self.derived):
            raise CatalogError("records and derived entries must cover the same ids")

    def __len__(self) -> int:
        return len(self.records)


_AC_FACTOR = {
    AccessComplexity.LOW: 0.71,
    AccessComplexity.MEDIUM: 0.61,
    AccessComplexity.HIGH: 0.35,
}

_AV_REQUIREMENT = {
    AttackVector.LOCAL: AccessRequirement.REQUIRES_LOCAL,
    AttackVector.ADJACENT_NETWORK: AccessRequirement.REQUIRES_ADJACENT,
    AttackVector.NETWORK: AccessRequirement.REQUIRES_NETWORK_OR_ADJACENT,
}


def derive_exploit(record: VulnRecord) -> DerivedExploit:
    """Map base metrics to exploit parameters.

    Presence probability starts at 1.0, scales by the access-complexity
    factor (Low 0.71, Medium 0.61, High 0.35), by 0.8 when multiple
    authentications are required, and by 0.5 when confidentiality impact is
    only partial.
    """
    p = 1.0
    p *= _AC_FACTOR[record.access_complexity]
    if record.authentication is Authentication.MULTIPLE:
        p *= 0.8
    if record.conf_impact is Impact.PARTIAL:
        p *= 0.5
    return DerivedExploit(
        cve_id=record.cve_id,
        access_requirement=_AV_REQUIREMENT[record.attack_vector],
        requires_credentials=record.authentication is not Authentication.NONE,
        presence_probability=p,
        grants=frozenset({Grant.READ_ACCESS, Grant.COMPROMISED}),
    )


def parse_record(raw: Mapping[str, object]) -> VulnRecord:
    keys = set(raw)
    if keys != _RECORD_KEYS:
        cve = raw.get("cve_id", "<missing>")
        bad = (keys - _RECORD_KEYS) | (_RECORD_KEYS - keys)
        raise CatalogError(f"record {cve}: unexpected or missing fields {sorted(bad)}")
    cve_id = raw["cve_id"]
    m = _CVE_RE.match(str(cve_id))
    if not m:
        raise CatalogError(f"record {cve_id}: field cve_id is not of the form CVE-<year>-<number>")

    def _enum(field: str, enum_cls):
        value = raw[field]
        try:
            return enum_cls(value)
        except ValueError:
            raise CatalogError(
                f"record {cve_id}: field {field} has invalid value {value!r}"
            ) from None

    published = raw["published_year"]
    if not isinstance(published, int):
        raise CatalogError(f"record {cve_id}: field published_year must be an integer")
    return VulnRecord(
        cve_id=str(cve_id),
        year=int(m.group(1)),
        published_year=published,
        attack_vector=_enum("attack_vector", AttackVector),
        access_complexity=_enum("access_complexity", AccessComplexity),
        authentication=_enum("authentication", Authentication),
        conf_impact=_enum("conf_impact", Impact),
        integ_impact=_enum("integ_impact", Impact),
        avail_impact=_enum("avail_impact", Impact),
    )


def load_catalog(path_or_items) -> Catalog:
    """Build a Catalog from a JSON file path or an iterable of record dicts.

    Duplicate cve_ids and malformed records raise CatalogError naming the
    offending id and field.
    """
    if isinstance(path_or_items, (str, bytes)) or hasattr(path_or_items, "read_text"):
        text = (
            path_or_items.read_text()
            if hasattr(path_or_items, "read_text")
            else open(path_or_items).read()
        )
        items = json.loads(text)
    else:
        items = list(path_or_items)
    if not isinstance(items, list):
        raise CatalogError("catalog file must contain a JSON array of records")
    records: dict[str, VulnRecord] = {}
    for raw in items:
        rec = parse_record(raw)
        if rec.cve_id in records:
            raise CatalogError(f"record {rec.cve_id}: duplicate cve_id")
        records[rec.cve_id] = rec
    derived = {cid: derive_exploit(rec) for cid, rec in records.items()}
    return Catalog(records=records, derived=derived)


def dump_catalog(catalog: Catalog) -> list[dict]:
    """Serialize back to the on-disk record shape (round-trips load_catalog)."""
    out = []
    for rec in catalog.records.values():
        out.append(
            {
                "cve_id": rec.cve_id,
                "published_year": rec.published_year,
                "attack_vector": rec.attack_vector.value,
                "access_complexity": rec.access_complexity.value,
                "authentication": rec.authentication.value,
                "conf_impact": rec.conf_impact.value,
                "integ_impact": rec.integ_impact.value,
                "avail_impact": rec.avail_impact.value,
            }
        )
    return out


def build_profile(
    catalog: Catalog,
    name: str,
    os_class: OsClass,
    ids: Iterable[str],
    min_year: int = 2002,
) -> VulnProfile:
    """Resolve ids against the catalog, drop entries older than min_year,
    keep first occurrence order, and drop duplicates."""
    members: list[str] = []
    seen: set[str] = set()
    for cid in ids:
        rec = catalog.records.get(cid)
        if rec is None:
            raise CatalogError(f"profile {name}: unknown cve_id {cid}")
        if cid in seen:
            continue
        seen.add(cid)
        if rec.year >= min_year:
            members.append(cid)
    return VulnProfile(name=name, os_class=os_class, members=tuple(members))


def load_profile_file(path_or_resource) -> tuple[str, OsClass, list[str]]:
    text = (
        path_or_resource.read_text()
        if hasattr(path_or_resource, "read_text")
        else open(path_or_resource).read()
    )
    raw = json.loads(text)
    for key in ("name", "os_class", "members"):
        if key not in raw:
            raise CatalogError(f"profile file missing key {key!r}")
    return raw["name"], OsClass(raw["os_class"]), list(raw["members"])


def bundled_catalog() -> Catalog:
    return load_catalog(resources.files("netrisk.data").joinpath("catalog.json"))


def bundled_profiles(catalog: Catalog, min_year: int = 2002) -> dict[OsClass, VulnProfile]:
    """The four shipped profiles, one per OS class, built over the given
    catalog with the year filter applied."""
    out: dict[OsClass, VulnProfile] = {}
    prof_dir = resources.files("netrisk.data").joinpath("profiles")
    for entry in sorted(prof_dir.iterdir(), key=lambda e: e.name):
        if not entry.name.endswith(".json"):
            continue
        name, os_class, ids = load_profile_file(entry)
        out[os_class] = build_profile(catalog, name, os_class, ids, min_year=min_year)
    if len(out) != 4:
        raise CatalogError("expected exactly one bundled profile per OS class")
    return out
