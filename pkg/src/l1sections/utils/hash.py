# src/l1sections/utils/hash.py
import hashlib
from typing import Optional, Union


def content_digest(content: Union[str, bytes], length: Optional[int] = None) -> str:
    """sha256 hex digest of text (UTF-8) or bytes, optionally truncated."""
    data = content.encode("utf-8") if isinstance(content, str) else content
    digest = hashlib.sha256(data).hexdigest()
    return digest[:length] if length else digest


def matrix_digest(check_text: str, length: int = 16) -> str:
    """Short digest of a serialized CHECK matrix; equal digests mean byte-identical files."""
    return content_digest(check_text, length)
