"""Sentence segmentation of streamed text, buffered for sequential playback."""

from __future__ import annotations

import threading
from collections import deque
from typing import List, Optional

_TERMINATORS = ".!?"


class SentenceQueue:
    """FIFO of completed sentences fed by incremental text chunks.

    One producer pushes chunks, one consumer dequeues sentences.  The byte
    content is conserved: dequeued sentences plus the pending buffer always
    concatenate to exactly the pushed text.
    """

    def __init__(self, max_sentence_length: int = 200):
        if max_sentence_length < 1:
            raise ValueError("max_sentence_length must be positive")
        self.max_sentence_length = max_sentence_length
        self.pending = ""
        self._sentences: deque = deque()
        self._ready = threading.Condition()

    def push(self, chunk: str) -> List[str]:
        """Append a chunk; returns the sentences this chunk completed.

        A sentence ends at '.', '!' or '?' when followed by whitespace or
        sitting at the end of the buffer; a buffer that outgrows the length
        cap is flushed at its last whitespace (or hard-cut) as a fallback.
        """
        completed = []
        self.pending += chunk
        while True:
            sentence = self._take_sentence()
            if sentence is None:
                break
            completed.append(sentence)
        if completed:
            with self._ready:
                self._sentences.extend(completed)
                self._ready.notify_all()
        return completed

    def _take_sentence(self) -> Optional[str]:
        text = self.pending
        for i, ch in enumerate(text):
            if ch in _TERMINATORS and (i + 1 == len(text) or text[i + 1].isspace()):
                self.pending = text[i + 1 :]
                return text[: i + 1]
        if len(text) > self.max_sentence_length:
            cut = text.rfind(" ", 0, self.max_sentence_length)
            if cut <= 0:
                cut = self.max_sentence_length
            self.pending = text[cut:]
            return text[:cut]
        return None

    def pop(self, timeout: Optional[float] = None) -> Optional[str]:
        """Next completed sentence; blocks up to timeout, None when empty."""
        with self._ready:
            if not self._sentences and timeout:
                self._ready.wait(timeout)
            if self._sentences:
                return self._sentences.popleft()
            return None

    def drain(self) -> List[str]:
        with self._ready:
            out = list(self._sentences)
            self._sentences.clear()
            return out

    def __len__(self) -> int:
        with self._ready:
            return len(self._sentences)


def push_stream(queue: SentenceQueue, chunk: str) -> List[str]:
    return queue.push(chunk)
