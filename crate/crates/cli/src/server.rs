use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Multipart, Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use log::info;
use serde::Deserialize;
use serde_json::{json, Value};

use chromatika::apps::{self, NamedImage, QueryScoring};
use chromatika::color::{Palette5, WedOptions};
use chromatika::corpus::decode_image;
use chromatika::lda::TrainedModel;

use crate::output::json_value;
use crate::views;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub model: PathBuf,
    pub pool: PathBuf,
    pub bind: IpAddr,
    pub port: u16,
}

/// Read-only state shared by all handlers.
pub struct AppState {
    pub model: TrainedModel,
    pub pool: Vec<Palette5>,
}

impl AppState {
    pub fn load(config: &ServiceConfig) -> anyhow::Result<Self> {
        let model = crate::commands::load_model(&config.model)?;
        model.validate()?;
        let pool = crate::commands::load_pool(&config.pool)?;
        Ok(AppState { model, pool })
    }
}

pub struct ApiError {
    status: StatusCode,
    body: Value,
}

impl ApiError {
    fn bad_request(msg: impl std::fmt::Display) -> Self {
        ApiError { status: StatusCode::BAD_REQUEST, body: json!({ "error": msg.to_string() }) }
    }
}

impl From<chromatika::Error> for ApiError {
    fn from(e: chromatika::Error) -> Self {
        use chromatika::Error as E;
        match e {
            E::Query { ref dropped } => ApiError {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                body: json!({ "error": e.to_string(), "dropped": dropped }),
            },
            E::Input(_) | E::Decode(_) | E::Degenerate(_) | E::EmptySubgroup(_) => ApiError::bad_request(e),
            other => {
                ApiError { status: StatusCode::INTERNAL_SERVER_ERROR, body: json!({ "error": other.to_string() }) }
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn json_ok<T: serde::Serialize>(data: &T) -> ApiResult<Json<Value>> {
    json_value(data, false)
        .map(Json)
        .map_err(|e| ApiError { status: StatusCode::INTERNAL_SERVER_ERROR, body: json!({ "error": e.to_string() }) })
}

fn png_response(img: &image::RgbImage) -> ApiResult<Response> {
    let mut buf = std::io::Cursor::new(Vec::new());
    img.write_to(&mut buf, image::ImageFormat::Png)
        .map_err(|e| ApiError { status: StatusCode::INTERNAL_SERVER_ERROR, body: json!({ "error": e.to_string() }) })?;
    Ok(([(header::CONTENT_TYPE, "image/png")], buf.into_inner()).into_response())
}

async fn blocking<T, F>(f: F) -> ApiResult<T>
where
    F: FnOnce() -> ApiResult<T> + Send + 'static,
    T: Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError { status: StatusCode::INTERNAL_SERVER_ERROR, body: json!({ "error": e.to_string() }) })?
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/topics", get(topics))
        .route("/topics/{k}/palettes", get(topic_palettes))
        .route("/query", post(query))
        .route("/rerank", post(rerank))
        .route("/select-pixels", post(select_pixels))
        .route("/recolor", post(recolor))
        .with_state(state)
}

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok" }))
}

async fn topics(State(state): State<Arc<AppState>>) -> ApiResult<Json<Value>> {
    json_ok(&views::topics_view(&state.model))
}

#[derive(Deserialize)]
struct CountParam {
    n: Option<usize>,
}

async fn topic_palettes(
    State(state): State<Arc<AppState>>,
    Path(k): Path<String>,
    Query(q): Query<CountParam>,
) -> ApiResult<Json<Value>> {
    let k: usize = k.parse().map_err(|_| ApiError::bad_request(format!("topic `{k}` is not an index")))?;
    if k >= state.model.num_topics() {
        return Err(ApiError {
            status: StatusCode::NOT_FOUND,
            body: json!({ "error": format!("topic {k} out of range for K={}", state.model.num_topics()) }),
        });
    }
    let view = views::topic_palettes(&state.model, &state.pool, k, q.n.unwrap_or(5), WedOptions::default())?;
    json_ok(&view)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct QueryBody {
    text: String,
    #[serde(default = "default_n")]
    n: usize,
}

fn default_n() -> usize {
    5
}

async fn query(State(state): State<Arc<AppState>>, body: Bytes) -> ApiResult<Json<Value>> {
    let req: QueryBody = serde_json::from_slice(&body).map_err(ApiError::bad_request)?;
    blocking(move || {
        let n = req.n.min(state.pool.len());
        let rec = apps::recommend_palettes_with(
            &req.text,
            &state.model,
            &state.pool,
            n,
            QueryScoring::default(),
            WedOptions::default(),
        )?;
        json_ok(&views::query_view(&state.model, &rec, &state.pool))
    })
    .await
}

/// Multipart form: a `text` field, optional numeric fields, and image files.
struct Form {
    text: Option<String>,
    threshold: Option<f64>,
    images: Vec<NamedImage>,
}

async fn read_form(mut mp: Multipart) -> ApiResult<Form> {
    let mut form = Form { text: None, threshold: None, images: Vec::new() };
    while let Some(field) = mp.next_field().await.map_err(ApiError::bad_request)? {
        let name = field.name().unwrap_or_default().to_string();
        let file_name = field.file_name().map(str::to_string);
        let data = field.bytes().await.map_err(ApiError::bad_request)?;
        match (name.as_str(), file_name) {
            ("text", None) => form.text = Some(String::from_utf8(data.to_vec()).map_err(ApiError::bad_request)?),
            ("threshold", None) => {
                let t = std::str::from_utf8(&data).map_err(ApiError::bad_request)?;
                form.threshold = Some(t.trim().parse().map_err(ApiError::bad_request)?);
            }
            (_, Some(file)) => form.images.push(NamedImage { name: file, bytes: data.to_vec() }),
            (other, None) => return Err(ApiError::bad_request(format!("unexpected form field `{other}`"))),
        }
    }
    Ok(form)
}

impl Form {
    fn text(&self) -> ApiResult<String> {
        self.text.clone().ok_or_else(|| ApiError::bad_request("missing `text` field"))
    }

    fn single_image(&self) -> ApiResult<image::RgbImage> {
        match self.images.as_slice() {
            [one] => Ok(decode_image(&one.bytes)?),
            _ => Err(ApiError::bad_request(format!("expected one image file, got {}", self.images.len()))),
        }
    }
}

async fn rerank(State(state): State<Arc<AppState>>, mp: Multipart) -> ApiResult<Json<Value>> {
    let form = read_form(mp).await?;
    let text = form.text()?;
    blocking(move || {
        let ranked = apps::rerank_images(&text, &form.images, &state.model)?;
        json_ok(&json!({ "ranked": ranked }))
    })
    .await
}

#[derive(Deserialize)]
struct SelectParams {
    #[serde(default)]
    output: Option<String>,
}

async fn select_pixels(
    State(state): State<Arc<AppState>>,
    Query(params): Query<SelectParams>,
    mp: Multipart,
) -> ApiResult<Response> {
    let form = read_form(mp).await?;
    let text = form.text()?;
    let img = form.single_image()?;
    let threshold = form.threshold.unwrap_or(apps::DEFAULT_THRESHOLD);
    let want_mask = match params.output.as_deref() {
        None | Some("image") => false,
        Some("mask") => true,
        Some(other) => return Err(ApiError::bad_request(format!("unknown output `{other}`"))),
    };
    blocking(move || {
        let sel = apps::select_pixels(&img, &text, &state.model, threshold)?;
        if want_mask {
            let bytes = apps::encode_mask_png(&sel.mask)?;
            Ok(([(header::CONTENT_TYPE, "image/png")], bytes).into_response())
        } else {
            png_response(&sel.image)
        }
    })
    .await
}

async fn recolor(State(state): State<Arc<AppState>>, mp: Multipart) -> ApiResult<Response> {
    let form = read_form(mp).await?;
    let text = form.text()?;
    let img = form.single_image()?;
    blocking(move || {
        let rec = apps::recolor_pattern(&img, &text, &state.model, &state.pool)?;
        png_response(&rec.image)
    })
    .await
}

pub async fn serve(config: ServiceConfig) -> anyhow::Result<()> {
    let state = Arc::new(AppState::load(&config)?);
    let addr = SocketAddr::new(config.bind, config.port);
    let listener = tokio::net::TcpListener::bind(addr).await?;
    info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await?;
    Ok(())
}

pub fn run_blocking(config: ServiceConfig) -> anyhow::Result<()> {
    tokio::runtime::Builder::new_multi_thread().enable_all().build()?.block_on(serve(config))
}
