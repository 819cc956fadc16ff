//! Stateless JSON-over-HTTP facade for the play UI and scripted clients.
//!
//! Every response is a pure function of the request body. Errors carry
//! `{"error": "..."}` with 400 for malformed requests and 422 for requests
//! that are well-formed but cannot be evaluated.

use std::net::{Ipv4Addr, SocketAddr};
use std::time::Instant;

use axum::body::Bytes;
use axum::extract::Request;
use axum::http::{header, HeaderValue, Method, StatusCode};
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::{AllowOrigin, CorsLayer};

use crate::error::Error;
use crate::game::{GameState, Outcome, PassPosition, Position, RuleSet, VARIANT_NAMES};
use crate::grundy::grundy_closed_form;
use crate::strategy::{best_moves, engine_move, needs_oracle, outcome};
use crate::table::{grundy_table_document, Layer};

pub const DEFAULT_PORT: u16 = 8642;

/// Per-axis cap on oracle regions and table requests.
pub const SERVICE_MAX_REGION: u64 = 256;

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct GameDescriptor {
    pub variant: String,
    #[serde(default)]
    pub params: Params,
}

impl GameDescriptor {
    pub fn rules(&self) -> Result<RuleSet, Error> {
        let Params { p, q, r, n } = self.params;
        RuleSet::from_parts(&self.variant, p, q, r, n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize, Serialize)]
pub struct PositionPayload {
    pub coords: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl PositionPayload {
    pub fn into_state(self, rules: &RuleSet) -> Result<GameState, Error> {
        match (rules.is_pass(), self.pass) {
            (true, Some(pass)) => {
                if self.coords.len() != 2 {
                    return Err(Error::DimensionMismatch {
                        expected: 2,
                        got: self.coords.len(),
                    });
                }
                Ok(PassPosition::new(self.coords[0], self.coords[1], pass).into())
            }
            (true, None) => Err(Error::WrongOperation(
                "pass-ryuo positions need a pass flag".into(),
            )),
            (false, Some(_)) => Err(Error::WrongOperation(format!(
                "{} positions have no pass flag",
                rules.name()
            ))),
            (false, None) => {
                let pos = Position::new(self.coords);
                rules.check_position(&pos)?;
                Ok(pos.into())
            }
        }
    }
}

impl From<GameState> for PositionPayload {
    fn from(state: GameState) -> Self {
        match state {
            GameState::Plain(pos) => PositionPayload {
                coords: pos.into_inner(),
                pass: None,
            },
            GameState::Pass(pos) => PositionPayload {
                coords: vec![pos.x, pos.y],
                pass: Some(pos.pass),
            },
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct PositionRequest {
    pub game: GameDescriptor,
    pub position: PositionPayload,
}

#[derive(Debug, Deserialize)]
pub struct TableRequest {
    pub game: GameDescriptor,
    pub max: u64,
    #[serde(default)]
    pub layer: Option<String>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EvalResponse {
    pub grundy: Option<u64>,
    pub outcome: Outcome,
    pub terminal: bool,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MovesResponse {
    pub moves: Vec<PositionPayload>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct BestResponse {
    pub winning: Vec<PositionPayload>,
    pub engine_move: Option<PositionPayload>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TableResponse {
    pub rows: Vec<Vec<u64>>,
}

/// An error response.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
        }
    }

    fn unprocessable(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            message: message.into(),
        }
    }
}

impl From<Error> for ApiError {
    fn from(err: Error) -> Self {
        let status = match err {
            Error::InvalidRules(_) | Error::InvalidArgument(_) => StatusCode::BAD_REQUEST,
            Error::DimensionMismatch { .. }
            | Error::WrongOperation(_)
            | Error::UnsupportedVariant(_)
            | Error::NoClosedForm(_)
            | Error::OutOfRegion { .. }
            | Error::RegionTooLarge(_)
            | Error::Overflow(_)
            | Error::Terminal => StatusCode::UNPROCESSABLE_ENTITY,
            Error::NoWitness(_) => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError {
            status,
            message: err.to_string(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::bad_request(format!("malformed request: {e}")))
}

fn resolve(request: PositionRequest) -> Result<(RuleSet, GameState), ApiError> {
    let rules = request.game.rules()?;
    let state = request.position.into_state(&rules)?;
    if needs_oracle(&rules) && state.coords().iter().any(|&c| c > SERVICE_MAX_REGION) {
        return Err(ApiError::unprocessable(format!(
            "{rules} has no closed form and coordinates above {SERVICE_MAX_REGION} exceed the oracle cap"
        )));
    }
    Ok((rules, state))
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct VariantInfo {
    variant: &'static str,
    params: &'static [&'static str],
    dimension: Option<usize>,
    closed_form: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form_condition: Option<&'static str>,
    pposition_formula: bool,
}

fn catalogue() -> Vec<VariantInfo> {
    VARIANT_NAMES
        .iter()
        .map(|&variant| {
            let (params, dimension, closed_form, condition, pposition): (
                &'static [&'static str],
                _,
                _,
                _,
                _,
            ) = match variant {
                "ryuo" => (&["p"], Some(2), true, None, true),
                "pass-ryuo" => (&["p"], Some(2), false, None, true),
                "restricted-side" => (&["p", "q"], Some(2), true, Some("q mod p = 0, or q mod p = 1 with p >= 3"), true),
                "restricted-hv" => (
                    &["p", "q", "r"],
                    Some(2),
                    true,
                    Some("q mod p = 0 and r mod p = 0"),
                    true,
                ),
                "3dim" => (&[], Some(3), false, None, true),
                "3dim-modified" => (&[], Some(3), true, None, true),
                "ndim" => (&["p", "n"], None, true, None, true),
                _ => unreachable!("catalogue covers every variant"),
            };
            VariantInfo {
                variant,
                params,
                dimension,
                closed_form,
                closed_form_condition: condition,
                pposition_formula: pposition,
            }
        })
        .collect()
}

async fn variants() -> Json<serde_json::Value> {
    Json(json!({ "variants": catalogue() }))
}

async fn eval(body: Bytes) -> ApiResult<EvalResponse> {
    let (rules, state) = resolve(parse(&body)?)?;
    let grundy = match &state {
        GameState::Plain(pos) if rules.has_closed_form() => Some(grundy_closed_form(&rules, pos)?),
        _ => None,
    };
    let outcome = match grundy {
        Some(g) => Outcome::from_grundy(g),
        None => outcome(&rules, &state)?,
    };
    Ok(Json(EvalResponse {
        grundy,
        outcome,
        terminal: state.is_terminal(),
    }))
}

async fn moves(body: Bytes) -> ApiResult<MovesResponse> {
    let request: PositionRequest = parse(&body)?;
    let rules = request.game.rules()?;
    let state = request.position.into_state(&rules)?;
    let moves = rules.options(&state)?.into_iter().map(Into::into).collect();
    Ok(Json(MovesResponse { moves }))
}

async fn best(body: Bytes) -> ApiResult<BestResponse> {
    let (rules, state) = resolve(parse(&body)?)?;
    if state.is_terminal() {
        return Ok(Json(BestResponse {
            winning: vec![],
            engine_move: None,
        }));
    }
    let winning = best_moves(&rules, &state)?
        .into_iter()
        .map(|m| m.target.into())
        .collect();
    let engine = engine_move(&rules, &state)?;
    Ok(Json(BestResponse {
        winning,
        engine_move: Some(engine.target.into()),
    }))
}

async fn table(body: Bytes) -> ApiResult<TableResponse> {
    let request: TableRequest = parse(&body)?;
    if request.max > SERVICE_MAX_REGION {
        return Err(ApiError::bad_request(format!(
            "max {} exceeds the service cap of {SERVICE_MAX_REGION}",
            request.max
        )));
    }
    let rules = request.game.rules()?;
    let layer = request.layer.as_deref().map(str::parse::<Layer>).transpose()?;
    let doc = grundy_table_document(&rules, request.max, layer)?;
    Ok(Json(TableResponse { rows: doc.rows }))
}

async fn log_request(request: Request, next: Next) -> Response {
    let method = request.method().clone();
    let path = request.uri().path().to_string();
    let started = Instant::now();
    let response = next.run(request).await;
    eprintln!(
        "{method} {path} {} {:.1}ms",
        response.status().as_u16(),
        started.elapsed().as_secs_f64() * 1e3
    );
    response
}

fn is_local_origin(origin: &HeaderValue) -> bool {
    let Ok(origin) = origin.to_str() else {
        return false;
    };
    let Some(rest) = origin
        .strip_prefix("http://")
        .or_else(|| origin.strip_prefix("https://"))
    else {
        return false;
    };
    let host = rest.split(':').next().unwrap_or("");
    matches!(host, "localhost" | "127.0.0.1")
        || rest.starts_with("[::1]")
}

pub fn router() -> Router {
    let cors = CorsLayer::new()
        .allow_origin(AllowOrigin::predicate(|origin, _| is_local_origin(origin)))
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/api/variants", get(variants))
        .route("/api/eval", post(eval))
        .route("/api/moves", post(moves))
        .route("/api/best", post(best))
        .route("/api/table", post(table))
        .layer(cors)
        .layer(middleware::from_fn(log_request))
}

/// Binds `127.0.0.1:port`. Fails if the port is taken.
pub async fn bind(port: u16) -> std::io::Result<tokio::net::TcpListener> {
    tokio::net::TcpListener::bind(SocketAddr::from((Ipv4Addr::LOCALHOST, port))).await
}

/// Serves until interrupted.
pub async fn serve(listener: tokio::net::TcpListener) -> std::io::Result<()> {
    axum::serve(listener, router())
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
