"""Registration, activation, login, guests, and auth tokens.

Activation links are generated here and handed to a pluggable mail transport;
the default transport just records them so an operator (or a test) can read
them back. Auth and activation tokens live in the store, so a restarted
service keeps every valid session.
"""

from __future__ import annotations

import hashlib
import re
import secrets
from dataclasses import dataclass
from typing import Callable

from .core import PlayerAccount
from .errors import (
    CredentialsError,
    EmailInUseError,
    InfoSheetNotAcknowledgedError,
    InvalidEmailError,
    NotActivatedError,
    TokenInvalidError,
)
from .store import Store

_EMAIL = re.compile(r"^[^@\s]+@[^@\s]+\.[^@\s]+$")

ACTIVATION_TTL = 7 * 24 * 3600.0
AUTH_TTL = 30 * 24 * 3600.0

# ~10^5 iterations keeps tests fast; raise via subclassing for production.
_PBKDF2_ROUNDS = 100_000


@dataclass(frozen=True)
class AuthToken:
    token: str
    player: str
    expires_at: float
    guest: bool

    def as_dict(self) -> dict:
        return {"token": self.token, "player": self.player,
                "expires_at": self.expires_at, "guest": self.guest}


def _hash_password(password: str, salt: str) -> str:
    digest = hashlib.pbkdf2_hmac("sha256", password.encode(), salt.encode(),
                                 _PBKDF2_ROUNDS)
    return f"{salt}${digest.hex()}"


class MailTransport:
    """Delivery of activation links is pluggable; this default just records them."""

    def __init__(self) -> None:
        self.outbox: list[tuple[str, str]] = []

    def send_activation(self, email: str, token: str) -> None:
        self.outbox.append((email, token))


class AccountService:
    def __init__(self, store: Store, mail: MailTransport | None = None,
                 token_source: Callable[[], str] | None = None):
        self.store = store
        self.mail = mail or MailTransport()
        self._token_source = token_source or (lambda: secrets.token_urlsafe(32))

    # -- registration ------------------------------------------------------

    def register(self, email: str, age: int | None = None,
                 languages: list[str] | None = None,
                 info_sheet_ack: bool = False,
                 password: str | None = None,
                 display_name: str | None = None) -> tuple[PlayerAccount, str]:
        """Create a pending account; returns it with its activation token."""
        email = (email or "").strip().lower()
        if not _EMAIL.match(email):
            raise InvalidEmailError(f"not a valid email address: {email!r}")
        if not info_sheet_ack:
            raise InfoSheetNotAcknowledgedError(
                "the study information sheet must be acknowledged")
        if age is not None and (not isinstance(age, int) or age < 0):
            raise InvalidEmailError("age must be a non-negative integer")
        with self.store.transaction() as txn:
            if self.store.account_by_email(email) is not None:
                raise EmailInUseError(f"email already registered: {email}")
            player = self.store.next_account_id()
            password_hash = None
            if password:
                password_hash = _hash_password(password, self._token_source()[:16])
            txn.stage("account", {
                "id": player, "email": email, "activated": False, "guest": False,
                "age": age, "languages": list(languages or []),
                "privacy": False, "avatar": None, "display_name": display_name,
                "info_sheet_acknowledged": True, "password_hash": password_hash,
            })
            token = self._token_source()
            txn.stage("token", {
                "token": token, "purpose": "activation", "player": player,
                "expires_at": self.store.clock.now() + ACTIVATION_TTL, "guest": False,
            })
        account = self.store.get_account(player)
        self.mail.send_activation(email, token)
        return account, token

    def activate(self, token: str) -> AuthToken:
        record = self.store.resolve_token(token, "activation")
        with self.store.transaction() as txn:
            txn.stage("account_update", {"id": record["player"],
                                         "changes": {"activated": True}})
            txn.stage("token_used", {"token": token})
        return self._issue_auth(record["player"], guest=False)

    def login(self, email: str, password: str | None = None) -> AuthToken:
        account = self.store.account_by_email((email or "").strip().lower())
        if account is None:
            raise CredentialsError("unknown email")
        if account.password_hash is not None:
            if not password:
                raise CredentialsError("password required")
            salt = account.password_hash.split("$", 1)[0]
            if _hash_password(password, salt) != account.password_hash:
                raise CredentialsError("wrong password")
        if not account.activated:
            raise NotActivatedError("account is not activated yet")
        return self._issue_auth(account.id, guest=False)

    def guest_session(self) -> AuthToken:
        """Issue a playable guest identity without registration."""
        with self.store.transaction() as txn:
            player = self.store.next_account_id()
            txn.stage("account", {
                "id": player, "email": None, "activated": False, "guest": True,
                "age": None, "languages": [], "privacy": False, "avatar": None,
                "display_name": f"guest-{player}", "info_sheet_acknowledged": False,
                "password_hash": None,
            })
        return self._issue_auth(player, guest=True)

    # -- auth ---------------------------------------------------------------

    def _issue_auth(self, player: str, guest: bool) -> AuthToken:
        token = self._token_source()
        record = self.store.put_token(token, "auth", player, AUTH_TTL, guest=guest)
        return AuthToken(token=token, player=player,
                         expires_at=record["expires_at"], guest=guest)

    def authenticate(self, token: str) -> PlayerAccount:
        record = self.store.resolve_token(token, "auth")
        try:
            return self.store.get_account(record["player"])
        except Exception as exc:  # account events always precede token events
            raise TokenInvalidError("token references a missing account") from exc

    # -- profile ----------------------------------------------------------------

    MUTABLE_PROFILE_FIELDS = ("age", "languages", "privacy", "avatar",
                              "display_name", "info_sheet_acknowledged")

    def update_profile(self, player: str, **changes) -> PlayerAccount:
        allowed = {k: v for k, v in changes.items()
                   if k in self.MUTABLE_PROFILE_FIELDS and v is not None}
        if allowed:
            with self.store.transaction() as txn:
                self.store.get_account(player)
                txn.stage("account_update", {"id": player, "changes": allowed})
        return self.store.get_account(player)
