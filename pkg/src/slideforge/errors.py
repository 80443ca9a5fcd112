"""Exception hierarchy shared across the pipeline."""


class SlideforgeError(Exception):
    """Base class for all errors raised by this package."""


# --- deck container / extraction ---

class NotAnArchive(SlideforgeError):
    """Input bytes are not a ZIP container (bad magic)."""


class NotAPresentation(SlideforgeError):
    """ZIP container lacks the required presentation parts."""


class CorruptContainer(SlideforgeError):
    """Container entry is unreadable or a referenced part is missing."""


class UnsupportedFormat(SlideforgeError):
    """Legacy binary deck format with no converter configured."""


class EngineUnavailable(SlideforgeError):
    """External OCR binary is not configured or not installed."""


class OcrFailure(SlideforgeError):
    """A single image failed to OCR; callers degrade to empty text."""


# --- knowledge base ---

class ExtractorUnavailable(SlideforgeError):
    """External PDF text extractor is not configured or not installed."""


class EmptyDocument(SlideforgeError):
    """Ingested source contains no extractable text."""


class DimMismatch(SlideforgeError):
    """Vector dimensionality does not match the index."""


class DuplicateId(SlideforgeError):
    """Chunk id already present in the index."""


class IoFailure(SlideforgeError):
    """Index file could not be read or written."""


class FormatVersionMismatch(SlideforgeError):
    """Index file has a wrong magic or an unsupported format version."""


class ChecksumMismatch(SlideforgeError):
    """Index file is truncated or fails CRC verification."""


# --- retrieval ---

class QuotaExceeded(SlideforgeError):
    """Web search API reported an exhausted quota."""


class TransportFailure(SlideforgeError):
    """Remote call failed after retries."""


# --- textbook generation ---

class EmptyDeck(SlideforgeError):
    """Deck has no slides to plan over."""


class PlanningFailed(SlideforgeError):
    """Chapter structure could not be parsed after all retries."""


class ChapterFailed(SlideforgeError):
    """A chapter produced no content after all retries."""


# --- service ---

class UnknownJob(SlideforgeError):
    """No job with the requested id."""


class NotReady(SlideforgeError):
    """Requested artifact is not available in the job's current state."""


class InvalidFileType(SlideforgeError):
    """Upload rejected by the upload policy (extension or magic)."""


class TooLarge(SlideforgeError):
    """Upload exceeds the policy's size limit."""


class InvalidCustomization(SlideforgeError):
    """Customization JSON is malformed or has invalid field values."""
