"""Remote few-shot translation over a chat-completion-style HTTP endpoint.

The prompt is a fixed ten-example template ending in a ``Function Call:``
anchor; the model is asked to continue with exactly one call string at
temperature 0 with a 64-token cap. Transports are injectable so the whole
path — prompt construction, retries, extraction, batching, resumption — is
testable offline; a mock is indistinguishable from the live endpoint.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Optional, Protocol, Sequence

import requests

from geocmd.datagen import Sample
from geocmd.records import PredictionRecord, load_predictions, prediction_line

API_KEY_ENV = "GEOCMD_API_KEY"


class LlmError(Exception):
    pass


class AuthError(LlmError):
    """Missing or rejected credentials; never retried."""


class RateLimited(LlmError):
    """HTTP 429; retried with backoff."""


class Timeout(LlmError):
    """The request timed out; retried with backoff."""


class TransportError(LlmError):
    """Connection failures and server-side errors; retried with backoff."""


class EmptyCompletion(LlmError):
    """The endpoint answered with no generated text."""


_RETRYABLE = (RateLimited, Timeout, TransportError)


FEW_SHOT_PROMPT = (
    "You are an expert system that translates user queries into geospatial "
    "function calls. Here are some examples:\n"
    "User: I'd like to zoom out by 2 levels\n"
    "Function Call: ZoomOut(2)\n"
    "User: Show the seismic activity map from WMS URL https://example.activity/wms\n"
    "Function Call: AddWMS('https://example.activity/wms')\n"
    "User: Load the point vector using point_zones_NY_kpn.kml!\n"
    "Function Call: AddVector('point', 'point_zones_NY_kpn.kml')\n"
    "User: Add marker 'University' at location -73.1888, 122.889!\n"
    "Function Call: AddMarker('University', [-73.1888, 122.889])\n"
    "User: Set map bounds from 62.2585, -120.3652 to 63.8833, -3.3906.\n"
    "Function Call: MoveToExtent(62.2585, -120.3652, 63.8833, -3.3906)\n"
    "User: Switch to the OpenMallMap layer for retail therapy.\n"
    "Function Call: AddLayer('OpenMallMap')\n"
    "User: Can we go to 40.5267, -79.4892?\n"
    "Function Call: Move(40.5267, -79.4892)\n"
    "User: Draw a Line on the map!\n"
    "Function Call: Draw('Line')\n"
    "User: Set the background color to ivory.\n"
    "Function Call: Cartography('background', 'ivory', null)\n"
    "User: Zoom in by 7 levels to focus on the details.\n"
    "Function Call: ZoomIn(7)\n"
    "User: {user_query}\n"
    "Function Call:"
)


def build_prompt(query: str) -> str:
    """The few-shot prompt with the user's request in the final slot."""
    return FEW_SHOT_PROMPT.replace("{user_query}", query)


@dataclass
class LlmConfig:
    endpoint_url: str
    model_name: str = "command-r-08-2024"
    api_key: Optional[str] = None
    temperature: float = 0.0
    max_tokens: int = 64
    timeout_ms: int = 30000
    max_retries: int = 3

    @classmethod
    def from_env(cls, endpoint_url: str, **kwargs) -> "LlmConfig":
        """Build a config with the key from GEOCMD_API_KEY (never from files)."""
        key = os.environ.get(API_KEY_ENV)
        if not key:
            raise AuthError(f"{API_KEY_ENV} is not set")
        return cls(endpoint_url=endpoint_url, api_key=key, **kwargs)


@dataclass
class LlmResponse:
    raw_text: str
    extracted_call: str
    latency_ms: float = 0.0
    retries: int = 0
    usage: dict = field(default_factory=dict)


class Transport(Protocol):
    def send(self, config: LlmConfig, payload: dict) -> dict: ...


class HttpTransport:
    """POSTs an OpenAI-style chat payload and maps HTTP failures to errors."""

    def send(self, config: LlmConfig, payload: dict) -> dict:
        headers = {"Content-Type": "application/json"}
        if config.api_key:
            headers["Authorization"] = f"Bearer {config.api_key}"
        try:
            response = requests.post(
                config.endpoint_url,
                json=payload,
                headers=headers,
                timeout=config.timeout_ms / 1000.0,
            )
        except requests.Timeout as exc:
            raise Timeout(str(exc)) from None
        except requests.RequestException as exc:
            raise TransportError(str(exc)) from None
        if response.status_code in (401, 403):
            raise AuthError(f"HTTP {response.status_code}")
        if response.status_code == 429:
            raise RateLimited("HTTP 429")
        if response.status_code >= 400:
            raise TransportError(f"HTTP {response.status_code}")
        try:
            return response.json()
        except ValueError as exc:
            raise TransportError(f"non-JSON response: {exc}") from None


def chat_payload(config: LlmConfig, prompt: str) -> dict:
    return {
        "model": config.model_name,
        "messages": [{"role": "user", "content": prompt}],
        "temperature": config.temperature,
        "max_tokens": config.max_tokens,
    }


def completion_text(envelope: dict) -> str:
    """Pull generated text out of the common response envelope shapes."""
    if isinstance(envelope.get("text"), str):
        return envelope["text"]
    choices = envelope.get("choices")
    if isinstance(choices, list) and choices:
        first = choices[0]
        if isinstance(first, dict):
            message = first.get("message")
            if isinstance(message, dict) and isinstance(message.get("content"), str):
                return message["content"]
            if isinstance(first.get("text"), str):
                return first["text"]
    message = envelope.get("message")
    if isinstance(message, dict):
        content = message.get("content")
        if isinstance(content, str):
            return content
        if isinstance(content, list):
            texts = [b.get("text") for b in content if isinstance(b, dict)]
            texts = [t for t in texts if isinstance(t, str)]
            if texts:
                return "".join(texts)
    generations = envelope.get("generations")
    if isinstance(generations, list) and generations:
        first = generations[0]
        if isinstance(first, dict) and isinstance(first.get("text"), str):
            return first["text"]
    if isinstance(envelope.get("content"), str):
        return envelope["content"]
    raise TransportError(f"unrecognized response envelope: {sorted(envelope)!r}")


_PREFIX = "Function Call:"


def extract_call(raw_text: str) -> str:
    """First line of the completion, minus any ``Function Call:`` prefix.

    Idempotent: running it over its own output changes nothing.
    """
    line = raw_text.split("\n", 1)[0].strip()
    if line.startswith(_PREFIX):
        line = line[len(_PREFIX):]
    return line.strip()


def translate_remote(
    config: LlmConfig,
    query: str,
    transport: Optional[Transport] = None,
    sleep: Callable[[float], None] = time.sleep,
) -> LlmResponse:
    """One translation request with exponential backoff on transient failures.

    An unparseable extracted call is not an error here: it is recorded and
    simply scores poorly downstream.
    """
    transport = transport or HttpTransport()
    payload = chat_payload(config, build_prompt(query))
    attempts = 0
    start = time.monotonic()
    while True:
        try:
            envelope = transport.send(config, payload)
            break
        except _RETRYABLE:
            if attempts >= config.max_retries:
                raise
            sleep(0.5 * (2.0**attempts))
            attempts += 1
    raw = completion_text(envelope)
    if not raw.strip():
        raise EmptyCompletion("endpoint returned no text")
    return LlmResponse(
        raw_text=raw,
        extracted_call=extract_call(raw),
        latency_ms=(time.monotonic() - start) * 1000.0,
        retries=attempts,
        usage=envelope.get("usage", {}) if isinstance(envelope.get("usage"), dict) else {},
    )


def batch_translate(
    config: LlmConfig,
    samples: Sequence[Sample],
    transport: Optional[Transport] = None,
    progress_path: str | Path | None = None,
    sleep: Callable[[float], None] = time.sleep,
) -> list[PredictionRecord]:
    """Translate samples sequentially, recording failures instead of raising.

    With ``progress_path`` every finished record is appended immediately, and
    a rerun skips ids already on disk, so interrupted runs resume without
    duplicates. Only authentication failures abort the batch.
    """
    done: dict[int, PredictionRecord] = {}
    if progress_path is not None and Path(progress_path).exists():
        for record in load_predictions(progress_path):
            done[record.id] = record
    progress = open(progress_path, "a", encoding="utf-8") if progress_path else None
    records: list[PredictionRecord] = []
    try:
        for sample in samples:
            if sample.id in done:
                records.append(done[sample.id])
                continue
            try:
                response = translate_remote(config, sample.query, transport, sleep)
                record = PredictionRecord(
                    id=sample.id,
                    system="llm",
                    kind="generation",
                    query=sample.query,
                    reference=sample.call,
                    prediction=response.extracted_call,
                )
            except AuthError:
                raise
            except LlmError as exc:
                record = PredictionRecord(
                    id=sample.id,
                    system="llm",
                    kind="generation",
                    query=sample.query,
                    reference=sample.call,
                    prediction="",
                    failed=True,
                    error=f"{type(exc).__name__}: {exc}",
                )
            records.append(record)
            if progress is not None:
                progress.write(prediction_line(record) + "\n")
                progress.flush()
    finally:
        if progress is not None:
            progress.close()
    return records
