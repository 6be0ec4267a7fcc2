"""Parsing and normalization of IPC classification codes.

An IPC code is hierarchical: section (A-H), class (two digits), subclass
(a letter), then an optional main group and subgroup, e.g. ``G06F40/30``.
Patent comparison works on the 3-depth truncation (section + class +
subclass, rendered as exactly four characters like ``"G06F"``), so a
patent carrying G06F40/30, G06F40/40 and G06F40/56 contributes a single
key.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import IpcParseError

SECTIONS = "ABCDEFGH"

#: Depth used throughout the scoring pipeline. Other depths are reachable
#: only through normalize_depth_keys and are not part of the default mode.
DEFAULT_DEPTH = 3


@dataclass(frozen=True, order=True)
class IpcKey3:
    """An IPC code truncated to section + class + subclass."""

    section: str
    class_num: str
    subclass: str

    def __str__(self) -> str:
        return f"{self.section}{self.class_num}{self.subclass}"


@dataclass(frozen=True)
class IpcCode:
    """A fully parsed IPC code.

    ``subgroup`` may only be present when ``main_group`` is; both are
    optional because codes are valid down to subclass depth.
    """

    section: str
    class_num: str
    subclass: str
    main_group: int | None = None
    subgroup: int | None = None

    def __post_init__(self):
        if self.section not in SECTIONS:
            raise ValueError(f"section must be one of {SECTIONS}, got {self.section!r}")
        if len(self.class_num) != 2 or not self.class_num.isdigit():
            raise ValueError(f"class must be exactly two digits, got {self.class_num!r}")
        if len(self.subclass) != 1 or not ("A" <= self.subclass <= "Z"):
            raise ValueError(f"subclass must be a single uppercase letter, got {self.subclass!r}")
        if self.main_group is not None and self.main_group < 1:
            raise ValueError(f"main group must be >= 1, got {self.main_group}")
        if self.subgroup is not None:
            if self.main_group is None:
                raise ValueError("subgroup requires a main group")
            if self.subgroup < 0:
                raise ValueError(f"subgroup must be >= 0, got {self.subgroup}")

    def __str__(self) -> str:
        text = f"{self.section}{self.class_num}{self.subclass}"
        if self.main_group is not None:
            text += str(self.main_group)
            if self.subgroup is not None:
                text += f"/{self.subgroup:02d}"
        return text


def parse_ipc(raw: str) -> IpcCode:
    """Parse one raw IPC string into a structured code.

    Accepts the compact rendering (``G06F40/30``), an optional single
    space between subclass and main group (``G06F 40/30``), zero-padded
    main groups, and lowercase letters. Anything else raises
    IpcParseError with the offending character position.
    """
    if raw is None or not raw.strip():
        raise IpcParseError("IPC code is empty", raw=raw)
    text = raw.strip()

    if text[0].upper() not in SECTIONS:
        raise IpcParseError(f"section must be A-H, got {text[0]!r}", raw=text, position=0)
    section = text[0].upper()

    if len(text) < 3 or not text[1:3].isdigit():
        raise IpcParseError("class must be exactly two digits", raw=text, position=1)
    class_num = text[1:3]

    if len(text) < 4 or not text[3].isalpha():
        raise IpcParseError("missing subclass letter", raw=text, position=3)
    subclass = text[3].upper()

    i = 4
    if i == len(text):
        return IpcCode(section, class_num, subclass)

    if text[i] == " ":
        i += 1  # official rendering puts one space before the group

    start = i
    while i < len(text) and text[i].isdigit():
        i += 1
    if i == start:
        raise IpcParseError(f"expected main group digits, got {text[start:]!r}", raw=text, position=start)
    main_group = int(text[start:i])
    if main_group < 1:
        raise IpcParseError("main group must be >= 1", raw=text, position=start)

    subgroup = None
    if i < len(text) and text[i] == "/":
        i += 1
        start = i
        while i < len(text) and text[i].isdigit():
            i += 1
        if i == start:
            raise IpcParseError("expected subgroup digits after '/'", raw=text, position=start)
        subgroup = int(text[start:i])

    if i != len(text):
        raise IpcParseError(f"trailing characters {text[i:]!r}", raw=text, position=i)
    return IpcCode(section, class_num, subclass, main_group, subgroup)


def truncate3(code: IpcCode) -> IpcKey3:
    """Drop main group and subgroup, keeping the 3-depth key."""
    return IpcKey3(code.section, code.class_num, code.subclass)


def normalize_code_set(raws: Iterable[str]) -> frozenset[IpcKey3]:
    """Parse every raw code and return the deduplicated set of 3-depth keys.

    All codes must parse; failures are reported together in a single
    IpcParseError rather than one at a time, so a dirty document surfaces
    every bad code at once. An empty input is an error: a patent with no
    IPC codes has no technological profile.
    """
    raws = list(raws)
    if not raws:
        raise IpcParseError("no IPC codes given")
    keys = set()
    failures = []
    for raw in raws:
        try:
            keys.add(truncate3(parse_ipc(raw)))
        except IpcParseError as exc:
            failures.append(str(exc))
    if failures:
        raise IpcParseError("unparseable IPC codes: " + "; ".join(failures))
    return frozenset(keys)


def depth_key(code: IpcCode, depth: int) -> str:
    """Render the code truncated to ``depth`` hierarchy levels (1-5).

    Depth 3 matches ``str(truncate3(code))``. Depths 4 and 5 require the
    group fields to be present. This hook exists for experimentation; the
    scoring pipeline is fixed at depth 3.
    """
    if not 1 <= depth <= 5:
        raise ValueError(f"depth must be in 1..5, got {depth}")
    if depth == 1:
        return code.section
    if depth == 2:
        return f"{code.section}{code.class_num}"
    if depth == 3:
        return f"{code.section}{code.class_num}{code.subclass}"
    if code.main_group is None:
        raise ValueError(f"code {code} has no main group; cannot key at depth {depth}")
    if depth == 4:
        return f"{code.section}{code.class_num}{code.subclass}{code.main_group}"
    if code.subgroup is None:
        raise ValueError(f"code {code} has no subgroup; cannot key at depth 5")
    return str(code)


def normalize_depth_keys(raws: Iterable[str], depth: int = DEFAULT_DEPTH) -> frozenset[str]:
    """Like normalize_code_set but keyed at an arbitrary depth, as strings."""
    raws = list(raws)
    if not raws:
        raise IpcParseError("no IPC codes given")
    return frozenset(depth_key(parse_ipc(raw), depth) for raw in raws)
