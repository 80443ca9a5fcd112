"""Chat-completion clients: remote endpoints, scripted stub, echo stub."""

from __future__ import annotations

import hashlib
import json
import logging
import re
import threading
import time
from dataclasses import dataclass

import requests

from ..errors import TransportFailure

logger = logging.getLogger("slideforge.textbook")

RETRIES = 3
BACKOFF_SECONDS = 0.5

ECHO_MODEL_ID = "stub-echo"


class LlmClient:
    """Interface: complete(model_id, system_prompt, user_prompt, params) -> text."""

    def complete(self, model_id: str, system_prompt: str, user_prompt: str,
                 temperature: float = 0.7, max_tokens: int = 4096) -> str:
        raise NotImplementedError

    def knows(self, model_id: str) -> bool:
        raise NotImplementedError


@dataclass
class ModelEndpoint:
    url: str
    api_key: str = ""
    remote_model: str = ""  # name sent on the wire; defaults to the registry id


class HttpChatClient(LlmClient):
    """POST {model, messages, temperature, max_tokens} -> choices[0].message.content.

    One registry of named endpoints; transient failures retry x3 with
    exponential backoff.
    """

    def __init__(self, endpoints: dict[str, ModelEndpoint],
                 timeout: float = 120.0, session: requests.Session | None = None):
        self.endpoints = dict(endpoints)
        self.timeout = timeout
        self._session = session or requests.Session()

    def knows(self, model_id: str) -> bool:
        return model_id in self.endpoints

    def complete(self, model_id, system_prompt, user_prompt, temperature=0.7, max_tokens=4096):
        endpoint = self.endpoints.get(model_id)
        if endpoint is None:
            raise KeyError(f"model {model_id!r} is not registered")
        headers = {"Content-Type": "application/json"}
        if endpoint.api_key:
            headers["Authorization"] = f"Bearer {endpoint.api_key}"
        body = {
            "model": endpoint.remote_model or model_id,
            "messages": [
                {"role": "system", "content": system_prompt},
                {"role": "user", "content": user_prompt},
            ],
            "temperature": temperature,
            "max_tokens": max_tokens,
        }
        last_error: Exception | None = None
        for attempt in range(RETRIES):
            try:
                resp = self._session.post(endpoint.url, json=body, headers=headers,
                                          timeout=self.timeout)
                if resp.status_code >= 500 or resp.status_code == 429:
                    last_error = TransportFailure(f"chat endpoint returned {resp.status_code}")
                elif resp.status_code >= 400:
                    raise TransportFailure(
                        f"chat request rejected: {resp.status_code} {resp.text[:200]}")
                else:
                    return resp.json()["choices"][0]["message"]["content"]
            except (requests.ConnectionError, requests.Timeout) as exc:
                last_error = TransportFailure(f"chat transport error: {exc}")
            except (KeyError, IndexError, ValueError) as exc:
                raise TransportFailure(f"malformed chat response: {exc}") from exc
            if attempt < RETRIES - 1:
                time.sleep(BACKOFF_SECONDS * 2 ** attempt)
        raise last_error  # type: ignore[misc]


class ScriptedLlmClient(LlmClient):
    """Deterministic stub replaying canned responses.

    Responses come either from a call-sequence list or a map keyed by the
    sha256 of (system + "\\0" + user). An optional on_call hook lets tests
    gate or observe individual calls.
    """

    def __init__(self, responses: list[str] | None = None,
                 by_prompt_hash: dict[str, str] | None = None,
                 on_call=None):
        self.responses = list(responses or [])
        self.by_prompt_hash = dict(by_prompt_hash or {})
        self.on_call = on_call
        self.calls: list[tuple[str, str, str]] = []
        self._lock = threading.Lock()

    @staticmethod
    def prompt_hash(system_prompt: str, user_prompt: str) -> str:
        return hashlib.sha256(f"{system_prompt}\0{user_prompt}".encode("utf-8")).hexdigest()

    def knows(self, model_id: str) -> bool:
        return True

    def complete(self, model_id, system_prompt, user_prompt, temperature=0.7, max_tokens=4096):
        with self._lock:
            self.calls.append((model_id, system_prompt, user_prompt))
            index = len(self.calls) - 1
        if self.on_call is not None:
            self.on_call(index, system_prompt, user_prompt)
        key = self.prompt_hash(system_prompt, user_prompt)
        if key in self.by_prompt_hash:
            return self.by_prompt_hash[key]
        with self._lock:
            if not self.responses:
                return ""
            return self.responses[min(index, len(self.responses) - 1)]


class EchoLlmClient(LlmClient):
    """Offline deterministic model: plans chapters over the listed slides
    and writes chapter bodies by echoing the slide content handed to it.

    Exists so the full pipeline runs without any remote endpoint.
    """

    def __init__(self, slides_per_chapter: int = 4):
        self.slides_per_chapter = max(1, slides_per_chapter)

    def knows(self, model_id: str) -> bool:
        return model_id == ECHO_MODEL_ID

    def complete(self, model_id, system_prompt, user_prompt, temperature=0.7, max_tokens=4096):
        if "Respond with strict JSON only" in user_prompt:
            return self._plan(user_prompt)
        return self._chapter(user_prompt)

    def _plan(self, user_prompt: str) -> str:
        deck_match = re.search(r"^Deck: (.*)$", user_prompt, re.MULTILINE)
        deck_name = deck_match.group(1).strip() if deck_match else "Deck"
        slides = re.findall(r"^- Slide (\d+): ([^|\n]*)", user_prompt, re.MULTILINE)
        indices = [int(num) for num, _ in slides]
        labels = {int(num): label.strip() for num, label in slides}
        chapters = []
        for start in range(0, len(indices), self.slides_per_chapter):
            block = indices[start: start + self.slides_per_chapter]
            title = labels.get(block[0], "") or f"Part {len(chapters) + 1}"
            chapters.append({
                "title": title,
                "summary": f"Covers slides {block[0]} to {block[-1]} of the source deck.",
                "slide_indices": block,
            })
        return json.dumps({"book_title": f"{deck_name}: A Course Textbook", "chapters": chapters})

    def _chapter(self, user_prompt: str) -> str:
        sections = re.split(r"^Slide (\d+) \(raw text\):$", user_prompt, flags=re.MULTILINE)
        parts: list[str] = []
        # sections alternate: [head, idx, body, idx, body, ...]
        for i in range(1, len(sections), 2):
            index = sections[i]
            body = sections[i + 1]
            body = re.split(r"^Slide \d+ \(OCR text\):$|^References:$", body, flags=re.MULTILINE)[0]
            text = body.strip()
            if not text:
                continue
            lines = text.split("\n")
            parts.append(f"### {lines[0]}")
            parts.append("")
            parts.append(f"This section revisits slide {index} in prose form.")
            parts.extend(lines[1:])
            parts.append("")
        ocr_blocks = re.findall(
            r"^Slide \d+ \(OCR text\):\n(.*?)(?=^Slide \d+ \(|^References:|\Z)",
            user_prompt, re.MULTILINE | re.DOTALL,
        )
        figure_lines = [line for block in ocr_blocks for line in block.strip().split("\n") if line.strip()]
        if figure_lines:
            parts.append("### Figures")
            parts.append("")
            parts.extend(figure_lines)
            parts.append("")
        if "Include exercises: yes" in user_prompt:
            parts.append("### Exercises")
            parts.append("")
            parts.append("1. Summarize the main argument of this chapter in three sentences.")
            parts.append("2. Apply one concept from this chapter to a system you know.")
        return "\n".join(parts).strip()


class LlmRouter(LlmClient):
    """Dispatches by model id across several clients; first match wins."""

    def __init__(self, clients: list[LlmClient]):
        self.clients = list(clients)

    def knows(self, model_id: str) -> bool:
        return any(c.knows(model_id) for c in self.clients)

    def complete(self, model_id, system_prompt, user_prompt, temperature=0.7, max_tokens=4096):
        for client in self.clients:
            if client.knows(model_id):
                return client.complete(model_id, system_prompt, user_prompt,
                                       temperature=temperature, max_tokens=max_tokens)
        raise KeyError(f"model {model_id!r} is not registered")
