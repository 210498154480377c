import { createApp } from "./app";
import { StateStore } from "./state";
import "./style.css";

const root = document.getElementById("app");
if (root) {
  const store = new StateStore(location.hash);
  window.addEventListener("hashchange", () => {
    store.update(new StateStore(location.hash).state);
  });
  void createApp(root, store);
}
