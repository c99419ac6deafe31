"""HTTP boundary: versioned JSON endpoints over the game engine.

Every engine error maps to exactly one stable wire code; malformed requests
become 4xx VALIDATION_ERROR responses, never 5xx. The acting player is
always taken from the Bearer token, never from the request body.
"""

from __future__ import annotations

import hmac
from typing import Optional

from fastapi import Depends, FastAPI, Header, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel, Field

from .accounts import AuthToken
from .core import PlayerAccount
from .corpus import export_records
from .engine import GameEngine
from .errors import EngineError, NotAuthorizedError, TokenInvalidError
from .session import GameSummary

API_PREFIX = "/api/v1"


class RegisterIn(BaseModel):
    email: str
    age: Optional[int] = None
    languages: list[str] = Field(default_factory=list)
    info_sheet_ack: bool = False
    password: Optional[str] = None
    display_name: Optional[str] = None


class ActivateIn(BaseModel):
    token: str


class LoginIn(BaseModel):
    email: str
    password: Optional[str] = None


class ProfileIn(BaseModel):
    age: Optional[int] = None
    languages: Optional[list[str]] = None
    privacy: Optional[bool] = None
    avatar: Optional[str] = None
    display_name: Optional[str] = None
    info_sheet_acknowledged: Optional[bool] = None


class StartGameIn(BaseModel):
    modality: str
    mood_rating: int


class RespondIn(BaseModel):
    label: str


def _error_body(code: str, message: str) -> dict:
    return {"error": {"code": code, "message": message}}


def _token_view(auth: AuthToken) -> dict:
    return auth.as_dict()


def _account_view(account: PlayerAccount) -> dict:
    return {
        "player": account.id,
        "email": account.email,
        "activated": account.activated,
        "guest": account.guest,
        "age": account.age,
        "languages": account.languages,
        "privacy": account.privacy,
        "avatar": account.avatar,
        "display_name": account.label_for_display,
        "info_sheet_acknowledged": account.info_sheet_acknowledged,
    }


def _summary_view(summary: GameSummary) -> dict:
    return summary.as_dict()


def create_app(engine: GameEngine, admin_token: str | None = None,
               static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="moodgame", version="1.0", docs_url=None, redoc_url=None)

    # -- error mapping ------------------------------------------------------

    @app.exception_handler(EngineError)
    async def engine_error(request: Request, exc: EngineError):
        return JSONResponse(status_code=exc.http_status,
                            content=_error_body(exc.code, str(exc)))

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=422,
                            content=_error_body("VALIDATION_ERROR", "invalid request body"))

    @app.exception_handler(Exception)
    async def unexpected_error(request: Request, exc: Exception):
        return JSONResponse(status_code=500,
                            content=_error_body("INTERNAL_ERROR", "internal error"))

    # -- auth ---------------------------------------------------------------

    def current_account(authorization: Optional[str] = Header(None)) -> PlayerAccount:
        if not authorization or not authorization.startswith("Bearer "):
            raise TokenInvalidError("missing bearer token")
        return engine.accounts.authenticate(authorization.removeprefix("Bearer ").strip())

    def require_admin(x_admin_token: Optional[str] = Header(None)) -> None:
        if not admin_token or not x_admin_token or \
                not hmac.compare_digest(x_admin_token, admin_token):
            raise NotAuthorizedError("admin credential required")

    def own_session(session_id: str, account: PlayerAccount):
        session = engine.store.get_session(session_id)
        if session.player != account.id:
            raise NotAuthorizedError("session belongs to another player")
        return session

    # -- accounts -------------------------------------------------------------

    @app.post(API_PREFIX + "/register", status_code=201)
    def register(body: RegisterIn):
        account, activation_token = engine.accounts.register(
            email=body.email, age=body.age, languages=body.languages,
            info_sheet_ack=body.info_sheet_ack, password=body.password,
            display_name=body.display_name)
        # Token is surfaced for the pluggable mail transport; production
        # deployments deliver it by email instead of reading it here.
        return {"account": _account_view(account), "activation_token": activation_token}

    @app.post(API_PREFIX + "/activate")
    def activate(body: ActivateIn):
        return _token_view(engine.accounts.activate(body.token))

    @app.post(API_PREFIX + "/login")
    def login(body: LoginIn):
        return _token_view(engine.accounts.login(body.email, body.password))

    @app.post(API_PREFIX + "/guest")
    def guest():
        return _token_view(engine.accounts.guest_session())

    @app.get(API_PREFIX + "/profile")
    def get_profile(account: PlayerAccount = Depends(current_account)):
        return _account_view(account)

    @app.put(API_PREFIX + "/profile")
    def put_profile(body: ProfileIn,
                    account: PlayerAccount = Depends(current_account)):
        updated = engine.accounts.update_profile(
            account.id, **body.model_dump(exclude_none=True))
        return _account_view(updated)

    # -- game -------------------------------------------------------------------

    @app.post(API_PREFIX + "/games", status_code=201)
    def start_game(body: StartGameIn,
                   account: PlayerAccount = Depends(current_account)):
        session = engine.sessions.start_game(account.id, body.modality,
                                             body.mood_rating)
        return {"session": session.id, "modality": session.modality.value,
                "mood_rating": session.mood_rating, "started_at": session.started_at}

    @app.get(API_PREFIX + "/games/{session_id}/snippet")
    def next_snippet(session_id: str,
                     account: PlayerAccount = Depends(current_account)):
        session = own_session(session_id, account)
        snippet, counted = engine.sessions.next_snippet(session)
        return {
            "snippet": {"id": snippet.id, "modality": snippet.modality.value,
                        "payload": snippet.payload, "title": snippet.title},
            "counted": counted,
        }

    @app.post(API_PREFIX + "/games/{session_id}/responses")
    def respond(session_id: str, body: RespondIn,
                account: PlayerAccount = Depends(current_account)):
        session = own_session(session_id, account)
        breakdown, messages, new_badges = engine.sessions.submit_response(
            session, session.pending[0] if session.pending else "", body.label)
        return {
            "breakdown": breakdown.as_dict(),
            "messages": [m.as_dict() for m in messages],
            "new_badges": new_badges,
            "game_score": engine.store.get_session(session_id).game_score,
        }

    @app.post(API_PREFIX + "/games/{session_id}/end")
    def end_game(session_id: str,
                 account: PlayerAccount = Depends(current_account)):
        session = own_session(session_id, account)
        return _summary_view(engine.sessions.end_game(session))

    # -- boards and stats ----------------------------------------------------------

    @app.get(API_PREFIX + "/leaderboard")
    def leaderboard(modality: Optional[str] = Query(None),
                    limit: int = Query(10, ge=1, le=500)):
        entries = engine.leaderboard(modality, limit)
        return {"modality": modality, "entries": [
            {"rank": e.rank, "player": e.player, "display_name": e.display_name,
             "avatar": e.avatar, "total_score": e.total_score}
            for e in entries
        ]}

    @app.get(API_PREFIX + "/stats/me")
    def my_stats(account: PlayerAccount = Depends(current_account)):
        return engine.stats_view(account.id)

    @app.get(API_PREFIX + "/badges/progress")
    def badges_progress(account: PlayerAccount = Depends(current_account)):
        return {"badges": [
            {"badge": row.badge.name, "metric": row.badge.metric.value,
             "threshold": row.badge.threshold, "current": row.current,
             "earned": row.earned, "earned_at": row.earned_at}
            for row in engine.badge_progress(account.id)
        ]}

    # -- admin ------------------------------------------------------------------------

    @app.get(API_PREFIX + "/admin/annotations/export")
    def admin_export(modality: Optional[str] = Query(None),
                     _: None = Depends(require_admin)):
        import json
        lines = [json.dumps(r, sort_keys=True, separators=(",", ":"))
                 for r in export_records(engine.store, modality)]
        return PlainTextResponse("\n".join(lines) + ("\n" if lines else ""))

    @app.get(API_PREFIX + "/admin/report")
    def admin_report(_: None = Depends(require_admin)):
        return engine.stats_report().as_dict()

    if static_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
