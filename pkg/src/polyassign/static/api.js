/** Typed client for the session service. Field names mirror the wire format
 * verbatim; the client never recomputes anything the server already reports.
 */
export class ApiError extends Error {
    constructor(status, code, message) {
        super(message);
        this.status = status;
        this.code = code;
        this.name = "ApiError";
    }
}
async function request(url, init) {
    let res;
    try {
        res = await fetch(url, init);
    }
    catch (err) {
        throw new ApiError(0, "unreachable", `service unreachable: ${String(err)}`);
    }
    const text = await res.text();
    let payload = null;
    if (text) {
        try {
            payload = JSON.parse(text);
        }
        catch {
            throw new ApiError(res.status, "bad_payload", "service sent invalid JSON");
        }
    }
    if (!res.ok) {
        const err = payload?.error;
        throw new ApiError(res.status, err?.code ?? "internal", err?.message ?? res.statusText);
    }
    return payload;
}
export class Api {
    constructor(base = "") {
        this.base = base;
    }
    cases() {
        return request(`${this.base}/api/cases`);
    }
    createFromCase(caseSpec, replay = false) {
        return this.post("/api/sessions", { case: caseSpec, replay });
    }
    createCustom(config) {
        return this.post("/api/sessions", config);
    }
    getSession(id) {
        return request(`${this.base}/api/sessions/${id}`);
    }
    place(id, s) {
        return this.post(`/api/sessions/${id}/customers`, { s });
    }
    undo(id) {
        return this.post(`/api/sessions/${id}/undo`, {});
    }
    reset(id) {
        return this.post(`/api/sessions/${id}/reset`, {});
    }
    async remove(id) {
        await request(`${this.base}/api/sessions/${id}`, { method: "DELETE" });
    }
    exportScenario(id) {
        return request(`${this.base}/api/sessions/${id}/export`);
    }
    post(path, body) {
        return request(`${this.base}${path}`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        });
    }
}
