"""Exception types shared across the package."""


class TriekitError(Exception):
    """Base class for all triekit errors."""


class AlphabetOverflowError(TriekitError):
    """A symbol or pattern character lies outside [1, sigma]."""


class DuplicateKeyError(TriekitError):
    """Key or string is already stored."""


class InvalidInputError(TriekitError):
    """Malformed argument (unsorted keys, bad interval, ...)."""


class CorruptTrieError(TriekitError):
    """Trie payload data is internally inconsistent."""


class InvalidHandleError(TriekitError):
    """An element handle does not belong to the structure."""


class MarkOrderViolationError(TriekitError):
    """Attempt to mark a node whose parent is not marked yet."""
