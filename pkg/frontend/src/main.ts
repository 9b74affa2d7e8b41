// Page entry point: same-origin API, one store, one render loop.

import { ApiClient } from "./api.js";
import { ChatStore } from "./state.js";
import { bindUi } from "./ui.js";

const api = new ApiClient("");
const store = new ChatStore(api);
const refs = bindUi(document, store);

api
  .health()
  .then((health) => {
    refs.status.textContent = `connected · ${health.index_entries} indexed chunks`;
  })
  .catch(() => {
    refs.status.textContent = "service unreachable; answers will fail until it is back";
  });
